"""Chain driver and the empirical checks of the contraction and gradient-sum bounds."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..contracts.experiment import SamplerConfig
from ..core.kernel import build_kernel, build_primed_kernel
from ..core.potential import PotentialSpec
from ..shared.enums import BatchMode, Dynamics, InterpolantConvention, Method
from ..util.errors import DiagnosticUnavailableError, InvalidTargetError
from .chain import ChainState
from .overdamped import drift_map, olmc_step, oplmc_batch
from .schedules import OVERDAMPED_STEP_LIMIT
from .underdamped import ulmc_step, uplmc_batch

logger = logging.getLogger(__name__)

GRADIENT_SUM_CONSTANT = 8.0


@dataclass(slots=True)
class ChainRun:
    """Terminal state plus the snapshots taken along the way (the initial state first)."""

    final: ChainState
    trace: list[ChainState] = field(default_factory=list)
    index_set_total: int = 0


def run_chain(
    spec: PotentialSpec,
    config: SamplerConfig,
    state: ChainState,
    *,
    convention: InterpolantConvention = InterpolantConvention.exclusive,
    mode: BatchMode = BatchMode.skip_ahead,
    checkpoint_every: int | None = None,
) -> ChainRun:
    """Run ``config.n_batches`` batches (or Euler steps) from ``state``.

    With ``checkpoint_every`` set the trace holds the state every that many batches and always
    the final one.
    """
    if (state.velocity is None) != (config.dynamics == Dynamics.overdamped):
        raise InvalidTargetError("chain state does not match the configured dynamics")

    euler_kernel = None
    if config.dynamics == Dynamics.underdamped and config.method == Method.euler:
        assert config.gamma is not None
        euler_kernel = build_kernel(config.eta, config.gamma)

    run = ChainRun(final=state, trace=[state] if checkpoint_every else [])
    current = state
    for t in range(config.n_batches):
        before = current.gradient_calls
        if config.method == Method.euler:
            if euler_kernel is None:
                current = olmc_step(current, spec, config.eta)
            else:
                current = ulmc_step(current, spec, euler_kernel)
        elif config.dynamics == Dynamics.overdamped:
            current = oplmc_batch(current, spec, config.eta, config.k, convention=convention, mode=mode)
        else:
            assert config.gamma is not None
            current = uplmc_batch(current, spec, config.eta, config.k, config.gamma, mode=mode)
        if config.method == Method.poisson:
            run.index_set_total += current.gradient_calls - before - 1
        if checkpoint_every and ((t + 1) % checkpoint_every == 0 or t + 1 == config.n_batches):
            run.trace.append(current)
    run.final = current
    return run


@dataclass(frozen=True, slots=True)
class GradientSumReport:
    sum_sq_grad: float
    bound: float
    value_term: float
    noise_term: float
    constant: float = GRADIENT_SUM_CONSTANT

    @property
    def violated(self) -> bool:
        return self.sum_sq_grad > self.bound

    def to_dict(self) -> dict[str, float | bool]:
        return {
            "sum_sq_grad": self.sum_sq_grad,
            "bound": self.bound,
            "value_term": self.value_term,
            "noise_term": self.noise_term,
            "constant": self.constant,
            "violated": self.violated,
        }


def gradient_sum_diagnostic(
    traces: Sequence[Sequence[ChainState]], spec: PotentialSpec, eta: float
) -> GradientSumReport:
    """Chain-averaged ``Σ_t ‖∇F(X_tK)‖²`` over batch starts against ``C·[(F(X_0) - F(X_N))/η + L·d·N]``.

    Each trace holds one chain's states after every batch, the initial state first.
    """
    if spec.value is None:
        raise DiagnosticUnavailableError(f"target {spec.name} has no potential value map")
    if not traces:
        raise DiagnosticUnavailableError("no chain traces supplied")
    lengths = {len(trace) for trace in traces}
    if len(lengths) != 1 or min(lengths) < 1:
        raise DiagnosticUnavailableError("traces must be non-empty and of equal length")
    if eta * spec.ell > OVERDAMPED_STEP_LIMIT:
        logger.warning(f"[SAMPLE] gradient-sum bound used with eta*L={eta * spec.ell:.6g} above 1/8")

    n_batches = lengths.pop() - 1
    sums = []
    drops = []
    for trace in traces:
        sums.append(sum(float(np.sum(spec.gradient(s.position) ** 2)) for s in trace[:-1]))
        drops.append(spec.value(trace[0].position) - spec.value(trace[-1].position))
    value_term = float(np.mean(drops)) / eta
    noise_term = spec.ell * spec.dim * n_batches
    return GradientSumReport(
        sum_sq_grad=float(np.mean(sums)),
        bound=GRADIENT_SUM_CONSTANT * (value_term + noise_term),
        value_term=value_term,
        noise_term=float(noise_term),
    )


@dataclass(frozen=True, slots=True)
class ContractionReport:
    max_ratio: float
    bound: float
    rate_constant: float | None = None


def drift_map_contraction(
    spec: PotentialSpec, step: float, n_pairs: int, rng: np.random.Generator
) -> ContractionReport:
    """Largest ``‖T(x) - T(y)‖ / ‖x - y‖`` of the noiseless inner map over random pairs."""
    apply = drift_map(spec, step)
    center = spec.optimum if spec.optimum is not None else np.zeros(spec.dim)
    worst = 0.0
    for _ in range(n_pairs):
        x, y = center + rng.standard_normal((2, spec.dim))
        gap = float(np.linalg.norm(x - y))
        if gap == 0.0:
            continue
        worst = max(worst, float(np.linalg.norm(apply(x) - apply(y))) / gap)
    return ContractionReport(max_ratio=worst, bound=1.0 - spec.alpha * step)


def transformed_contraction(precisions, h: float, gamma: float) -> ContractionReport:
    """Operator norm of the noiseless kernel step in ``M`` coordinates for quadratic coordinates.

    A coordinate with precision ``λ`` maps ``X ↦ (A_h - λ·G_h e₁ᵀ) X``; conjugated by ``M`` this is
    ``A'_h - λ·G'_h e₁ᵀ``. The rate constant is ``min (1 - ‖·‖)·γ/(α h)`` with ``α = min λ``.
    """
    values = np.asarray(precisions, dtype=float).reshape(-1)
    if values.size == 0 or np.any(values <= 0):
        raise InvalidTargetError("precisions must be positive")
    primed = build_primed_kernel(h, gamma)
    alpha = float(values.min())
    norms = []
    for lam in values:
        step = primed.a - lam * primed.g
        norms.append(float(np.linalg.norm(step, 2)))
    worst = max(norms)
    return ContractionReport(
        max_ratio=worst,
        bound=1.0,
        rate_constant=min((1.0 - n) * gamma / (alpha * h) for n in norms),
    )


__all__ = [
    "GRADIENT_SUM_CONSTANT",
    "ChainRun",
    "ContractionReport",
    "GradientSumReport",
    "drift_map_contraction",
    "gradient_sum_diagnostic",
    "run_chain",
    "transformed_contraction",
]
