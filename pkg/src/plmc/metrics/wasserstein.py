"""Wasserstein-2 estimators: closed-form Gaussian, exact one-dimensional and sliced."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import linalg

from ..core.rng import RngStream
from ..shared.enums import Estimator
from ..util.errors import EstimatorMismatchError, InvalidCovarianceError

logger = logging.getLogger(__name__)

PSD_TOLERANCE = 1e-10


@dataclass(frozen=True, slots=True)
class W2Estimate:
    value_sq: float
    estimator: Estimator
    std_error: float | None = None

    @property
    def value(self) -> float:
        return float(np.sqrt(self.value_sq))


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    sym = 0.5 * (matrix + matrix.T)
    eigenvalues, vectors = linalg.eigh(sym)
    scale = max(1.0, float(np.abs(eigenvalues).max(initial=0.0)))
    if eigenvalues.size and eigenvalues.min() < -PSD_TOLERANCE * scale:
        raise InvalidCovarianceError(
            "covariance is not positive semidefinite", details={"min_eigenvalue": float(eigenvalues.min())}
        )
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (vectors * roots) @ vectors.T


def w2_gaussian(
    mean1,
    cov1,
    mean2,
    cov2,
    *,
    mode: Literal["auto", "diagonal", "full"] = "auto",
) -> float:
    """Squared W2 between two Gaussians.

    One-dimensional covariance arguments are read as diagonals. ``mode="diagonal"`` requires
    both to be diagonal and uses ``Σ_j (√σ1_j - √σ2_j)²``; full mode uses matrix square roots.
    """
    m1, m2 = np.asarray(mean1, dtype=float), np.asarray(mean2, dtype=float)
    c1, c2 = np.asarray(cov1, dtype=float), np.asarray(cov2, dtype=float)
    if m1.shape != m2.shape:
        raise EstimatorMismatchError("means have different shapes")
    shift = float(np.sum((m1 - m2) ** 2))
    diagonal_inputs = c1.ndim == 1 and c2.ndim == 1
    if mode == "diagonal" and not diagonal_inputs:
        raise EstimatorMismatchError("diagonal mode needs diagonal covariances")

    if diagonal_inputs and mode != "full":
        if c1.shape != m1.shape or c2.shape != m1.shape:
            raise EstimatorMismatchError("covariance diagonals do not match the means")
        if np.any(c1 < -PSD_TOLERANCE) or np.any(c2 < -PSD_TOLERANCE):
            raise InvalidCovarianceError("covariance diagonal has a negative entry")
        root_gap = np.sqrt(np.clip(c1, 0.0, None)) - np.sqrt(np.clip(c2, 0.0, None))
        return shift + float(np.sum(root_gap**2))

    full1 = np.diag(c1) if c1.ndim == 1 else c1
    full2 = np.diag(c2) if c2.ndim == 1 else c2
    dim = m1.shape[0]
    if full1.shape != (dim, dim) or full2.shape != (dim, dim):
        raise EstimatorMismatchError("covariances do not match the means")
    for cov in (full1, full2):
        if not np.allclose(cov, cov.T, rtol=0.0, atol=PSD_TOLERANCE * max(1.0, float(np.abs(cov).max()))):
            raise InvalidCovarianceError("covariance is not symmetric")
    root2 = _psd_sqrt(full2)
    cross = _psd_sqrt(root2 @ full1 @ root2)
    trace = float(np.trace(full1) + np.trace(full2) - 2.0 * np.trace(cross))
    return max(0.0, shift + trace)


def w2_exact_1d(samples_a, samples_b) -> float:
    """``(1/n) Σ (a_(i) - b_(i))²`` over order statistics."""
    a = np.sort(np.asarray(samples_a, dtype=float).reshape(-1))
    b = np.sort(np.asarray(samples_b, dtype=float).reshape(-1))
    if a.shape != b.shape:
        raise EstimatorMismatchError(
            "sample counts differ", details={"n_a": int(a.shape[0]), "n_b": int(b.shape[0])}
        )
    if a.size == 0:
        raise EstimatorMismatchError("no samples")
    return float(np.mean((a - b) ** 2))


def random_directions(n_directions: int, dim: int, rng: np.random.Generator | RngStream) -> np.ndarray:
    generator = rng.gaussian if isinstance(rng, RngStream) else rng
    raw = generator.standard_normal((n_directions, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def w2_sliced(
    samples_a,
    samples_b,
    n_directions: int,
    rng: np.random.Generator | RngStream | None = None,
    *,
    directions: np.ndarray | None = None,
) -> W2Estimate:
    """Average of exact 1D W2² over random unit projections.

    This is a surrogate that never exceeds the true W2²; the Monte-Carlo error is over directions.
    ``directions`` overrides the random draw.
    """
    a = np.asarray(samples_a, dtype=float)
    b = np.asarray(samples_b, dtype=float)
    if a.ndim != 2 or a.shape != b.shape:
        raise EstimatorMismatchError(
            "sliced estimator needs two n x d sample arrays of equal shape",
            details={"a": list(a.shape), "b": list(b.shape)},
        )
    if directions is None:
        if n_directions < 1:
            raise EstimatorMismatchError("need at least one direction", details={"n_directions": n_directions})
        if rng is None:
            raise EstimatorMismatchError("random directions need a generator")
        directions = random_directions(n_directions, a.shape[1], rng)
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    projected_a = np.sort(a @ dirs.T, axis=0)
    projected_b = np.sort(b @ dirs.T, axis=0)
    per_direction = np.mean((projected_a - projected_b) ** 2, axis=0)
    count = per_direction.shape[0]
    std_error = float(per_direction.std(ddof=1) / np.sqrt(count)) if count > 1 else 0.0
    return W2Estimate(value_sq=float(per_direction.mean()), estimator=Estimator.sliced, std_error=std_error)


def w2_threshold(epsilon: float, dim: int, alpha: float) -> float:
    """Acceptance level ``ε² d / α`` for squared W2."""
    return epsilon**2 * dim / alpha


__all__ = [
    "W2Estimate",
    "random_directions",
    "w2_exact_1d",
    "w2_gaussian",
    "w2_sliced",
    "w2_threshold",
]
