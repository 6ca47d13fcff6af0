"""Chain state shared by the four discretizations."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from ..core.potential import PotentialSpec
from ..core.rng import RngStream
from ..shared.enums import Dynamics
from ..util.errors import InvalidTargetError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, eq=False)
class ChainState:
    """One chain's iterate after ``batch_index`` batches.

    ``velocity`` is present exactly for underdamped chains. The RngStream is owned by the chain
    and advances as steps consume it.
    """

    position: np.ndarray
    velocity: np.ndarray | None
    batch_index: int
    gradient_calls: int
    rng: RngStream

    @property
    def dynamics(self) -> Dynamics:
        return Dynamics.overdamped if self.velocity is None else Dynamics.underdamped

    @property
    def dim(self) -> int:
        return int(self.position.shape[0])

    def stacked(self) -> np.ndarray:
        """Position and velocity as a ``(2, d)`` block."""
        if self.velocity is None:
            raise ValueError("overdamped chains carry no velocity")
        return np.stack([self.position, self.velocity])

    def advance(self, position: np.ndarray, velocity: np.ndarray | None, calls: int) -> ChainState:
        if calls < 0:
            raise ValueError("gradient call counts cannot decrease")
        return replace(
            self,
            position=position,
            velocity=velocity,
            batch_index=self.batch_index + 1,
            gradient_calls=self.gradient_calls + calls,
        )


class CountingGradient:
    """Wraps a gradient oracle and counts evaluations."""

    __slots__ = ("_gradient", "calls")

    def __init__(self, spec: PotentialSpec) -> None:
        self._gradient = spec.gradient
        self.calls = 0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        self.calls += 1
        return self._gradient(x)


def init_chain(spec: PotentialSpec, dynamics: Dynamics, rng: RngStream) -> ChainState:
    """Default initial state.

    Overdamped chains start at the optimum when it is known and at zero otherwise. Underdamped
    chains draw ``U0 ~ N(x*, I/L)`` and ``V0 ~ N(0, I)``.
    """
    center = np.array(spec.optimum, dtype=float) if spec.optimum is not None else np.zeros(spec.dim)
    if dynamics == Dynamics.overdamped:
        return ChainState(position=center, velocity=None, batch_index=0, gradient_calls=0, rng=rng)

    position = center + rng.standard_normal(spec.dim) / np.sqrt(spec.ell)
    velocity = rng.standard_normal(spec.dim)
    return ChainState(position=position, velocity=velocity, batch_index=0, gradient_calls=0, rng=rng)


def displaced_start(spec: PotentialSpec, dynamics: Dynamics, rng: RngStream, distance: float) -> ChainState:
    """Exact stationary draw of a Gaussian target, moved ``distance`` along its flattest axis.

    Underdamped chains also draw ``V0 ~ N(0, I)``, so only the position mean is off equilibrium.
    """
    if spec.gaussian is None:
        raise InvalidTargetError(f"displaced starts need a Gaussian target, got {spec.name}")
    if not distance >= 0:
        raise InvalidTargetError("start distance must be non-negative", details={"distance": distance})
    target = spec.gaussian
    position = target.mean + rng.standard_normal(spec.dim) * np.sqrt(target.stationary_cov_diag)
    position[int(np.argmin(target.precision_diag))] += distance
    velocity = rng.standard_normal(spec.dim) if dynamics == Dynamics.underdamped else None
    return ChainState(position=position, velocity=velocity, batch_index=0, gradient_calls=0, rng=rng)


__all__ = ["ChainState", "CountingGradient", "displaced_start", "init_chain"]
