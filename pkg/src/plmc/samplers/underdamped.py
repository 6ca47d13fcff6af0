"""Underdamped (kinetic) Langevin Monte Carlo with the exact OU kernel, and its Poisson batches.

States are handled as ``(2, d)`` blocks whose rows are position and velocity; every kernel block
acts on the leading axis, so one 2x2 product updates all coordinates.
"""

from __future__ import annotations

import logging

import numpy as np

from ..core.kernel import KernelBlocks, build_kernel, kernel_at
from ..core.noise_bridge import sample_index_set, sample_underdamped_bridge
from ..core.potential import PotentialSpec
from ..shared.enums import BatchMode
from ..util.errors import InvalidBatchError
from .chain import ChainState, CountingGradient

logger = logging.getLogger(__name__)


def _drift(gradient, block: np.ndarray) -> np.ndarray:
    return -gradient(block[0])


def ulmc_step(
    state: ChainState,
    spec: PotentialSpec,
    kernel: KernelBlocks,
    *,
    noise: np.ndarray | None = None,
) -> ChainState:
    """``X ↦ A_h X + G_h b(X) + Γ_h ξ`` with ``b = -∇F`` at the position; ``noise`` replaces ``ξ``."""
    x = state.stacked()
    b = -spec.gradient(x[0])
    xi = state.rng.standard_normal(x.shape) if noise is None else noise
    updated = kernel.a @ x + np.outer(kernel.g_col, b) + kernel.c_sqrt @ xi
    return state.advance(updated[0], updated[1], 1)


def uplmc_batch(
    state: ChainState,
    spec: PotentialSpec,
    eta: float,
    k: int,
    gamma: float,
    *,
    mode: BatchMode = BatchMode.skip_ahead,
) -> ChainState:
    """Advance one Poisson-midpoint batch of ``k`` inner kernel steps of size ``eta / k``.

    Skip-ahead form::

        X_K = A_η X_0 + G_η b_0 + Σ_{i∈S} k·A_{(k-1-i)h} G_h (b(X̂_i) - b_0) + W_k

    with ``X̂_i = A_{ih} X_0 + G_{ih} b_0 + W_i`` and the ``W`` values drawn by the noise bridge.
    """
    if not eta > 0:
        raise InvalidBatchError("step eta must be positive", details={"eta": eta})
    if k < 1:
        raise InvalidBatchError("batch size k must be at least 1", details={"k": k})
    if mode == BatchMode.naive:
        return _uplmc_batch_naive(state, spec, eta, k, gamma)

    gradient = CountingGradient(spec)
    h = eta / k
    x0 = state.stacked()
    b0 = _drift(gradient, x0)
    indices = sample_index_set(k, state.rng)
    plan = sample_underdamped_bridge(k, eta, gamma, x0.shape[1], indices, state.rng)

    full = build_kernel(eta, gamma)
    one_step = kernel_at(1, h, gamma)
    total = full.a @ x0 + np.outer(full.g_col, b0)
    for i, w_i in zip(plan.indices, plan.interpolant_noise, strict=True):
        if i == 0:
            x_hat = x0
        else:
            partial = kernel_at(i, h, gamma)
            x_hat = partial.a @ x0 + np.outer(partial.g_col, b0) + w_i
        kick = np.outer(one_step.g_col, _drift(gradient, x_hat) - b0)
        total = total + k * (kernel_at(k - 1 - i, h, gamma).a @ kick)
    updated = total + plan.end_noise
    return state.advance(updated[0], updated[1], gradient.calls)


def _uplmc_batch_naive(state: ChainState, spec: PotentialSpec, eta: float, k: int, gamma: float) -> ChainState:
    gradient = CountingGradient(spec)
    h = eta / k
    one_step = build_kernel(h, gamma)
    x0 = state.stacked()
    b0 = _drift(gradient, x0)
    selected = set(sample_index_set(k, state.rng))

    x = x0
    bridge = np.zeros_like(x0)
    for i in range(k):
        y = state.rng.standard_normal(x0.shape)
        forcing = b0
        if i in selected:
            if i == 0:
                x_hat = x0
            else:
                partial = kernel_at(i, h, gamma)
                x_hat = partial.a @ x0 + np.outer(partial.g_col, b0) + bridge
            forcing = b0 + k * (_drift(gradient, x_hat) - b0)
        kicked = one_step.c_sqrt @ y
        x = one_step.a @ x + np.outer(one_step.g_col, forcing) + kicked
        bridge = one_step.a @ bridge + kicked
    return state.advance(x[0], x[1], gradient.calls)


__all__ = ["ulmc_step", "uplmc_batch"]
