"""Overdamped Langevin Monte Carlo and its Poisson-midpoint batch variant."""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np

from ..core.noise_bridge import sample_index_set, sample_overdamped_bridge
from ..core.potential import PotentialSpec
from ..shared.enums import BatchMode, InterpolantConvention
from ..util.errors import InvalidBatchError
from .chain import ChainState, CountingGradient

logger = logging.getLogger(__name__)


def olmc_step(state: ChainState, spec: PotentialSpec, h: float, *, noise: np.ndarray | None = None) -> ChainState:
    """One Euler-Maruyama step ``x - h∇F(x) + √(2h)·z``; ``noise`` replaces the Gaussian draw."""
    if not h > 0:
        raise InvalidBatchError("step h must be positive", details={"h": h})
    x = state.position
    g = spec.gradient(x)
    z = state.rng.standard_normal(x.shape[0]) if noise is None else noise
    drift = x - h * g
    return state.advance(drift + np.sqrt(2.0 * h) * z, None, 1)


def drift_map(spec: PotentialSpec, step: float) -> Callable[[np.ndarray], np.ndarray]:
    """The noiseless inner-step map ``x ↦ x - step·∇F(x)``."""

    def apply(x: np.ndarray) -> np.ndarray:
        return x - step * spec.gradient(x)

    return apply


def oplmc_batch(
    state: ChainState,
    spec: PotentialSpec,
    eta: float,
    k: int,
    *,
    convention: InterpolantConvention = InterpolantConvention.exclusive,
    mode: BatchMode = BatchMode.skip_ahead,
) -> ChainState:
    """Advance one Poisson-midpoint batch of ``k`` inner steps of size ``eta / k``.

    The skip-ahead form evaluates the gradient at the batch start and at the cheap interpolant
    of every selected inner index, so a batch costs ``1 + |S|`` gradient calls whatever ``k`` is.
    ``mode=naive`` runs the same recursion one inner step at a time.
    """
    if not eta > 0:
        raise InvalidBatchError("step eta must be positive", details={"eta": eta})
    if k < 1:
        raise InvalidBatchError("batch size k must be at least 1", details={"k": k})
    if mode == BatchMode.naive:
        return _oplmc_batch_naive(state, spec, eta, k, convention)

    gradient = CountingGradient(spec)
    x0 = state.position
    g0 = gradient(x0)
    indices = sample_index_set(k, state.rng)
    plan = sample_overdamped_bridge(k, eta, x0.shape[0], indices, state.rng, convention=convention)

    correction = np.zeros_like(x0)
    for i, w_i in zip(plan.indices, plan.interpolant_noise, strict=True):
        x_hat = x0 - (eta * i / k) * g0 + w_i
        correction = correction + (g0 - gradient(x_hat))
    return state.advance(((x0 - eta * g0) + eta * correction) + plan.end_noise, None, gradient.calls)


def _oplmc_batch_naive(
    state: ChainState,
    spec: PotentialSpec,
    eta: float,
    k: int,
    convention: InterpolantConvention,
) -> ChainState:
    gradient = CountingGradient(spec)
    x0 = state.position
    g0 = gradient(x0)
    selected = set(sample_index_set(k, state.rng))
    scale = np.sqrt(2.0 * eta / k)
    inclusive = convention == InterpolantConvention.inclusive

    x = x0
    partial = np.zeros_like(x0)
    for i in range(k):
        y = state.rng.standard_normal(x0.shape[0])
        if i in selected:
            noise_sum = partial + y if inclusive else partial
            x_hat = x0 - (eta * i / k) * g0 + scale * noise_sum
            x = x + eta * (g0 - gradient(x_hat))
        x = x - (eta / k) * g0 + scale * y
        partial = partial + y
    return state.advance(x, None, gradient.calls)


__all__ = ["drift_map", "olmc_step", "oplmc_batch"]
