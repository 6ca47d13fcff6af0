"""Gradient oracles for strongly convex, smooth potentials and the shipped reference targets."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from ..util.errors import InvalidTargetError

logger = logging.getLogger(__name__)

GradientFn = Callable[[np.ndarray], np.ndarray]
ValueFn = Callable[[np.ndarray], float]

_RATIO_TOLERANCE = 1e-9


@dataclass(frozen=True, slots=True)
class GaussianTarget:
    """Quadratic potential whose stationary law is a diagonal Gaussian."""

    mean: np.ndarray
    precision_diag: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    @property
    def stationary_cov_diag(self) -> np.ndarray:
        return 1.0 / self.precision_diag

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        noise = rng.standard_normal((n, self.dim))
        return self.mean + noise * np.sqrt(self.stationary_cov_diag)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.precision_diag * (x - self.mean)

    def value(self, x: np.ndarray) -> float:
        diff = x - self.mean
        return 0.5 * float(np.dot(self.precision_diag * diff, diff))


@dataclass(frozen=True, slots=True)
class PotentialSpec:
    """Gradient oracle plus the strong-convexity and smoothness constants of ``F``.

    The oracle is a pure function of the point; call counting is done by the samplers.
    """

    alpha: float
    ell: float
    dim: int
    gradient: GradientFn
    optimum: np.ndarray | None = None
    value: ValueFn | None = None
    name: str = "custom"
    gaussian: GaussianTarget | None = None

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise InvalidTargetError("alpha must be positive", details={"alpha": self.alpha})
        if self.ell < self.alpha:
            raise InvalidTargetError(
                "ell must be at least alpha", details={"alpha": self.alpha, "ell": self.ell}
            )
        if self.dim < 0:
            raise InvalidTargetError("dimension must be non-negative", details={"dim": self.dim})

    @property
    def kappa(self) -> float:
        return self.ell / self.alpha


@dataclass(frozen=True, slots=True)
class ProbeReport:
    min_monotonicity_ratio: float
    max_lipschitz_ratio: float
    n_pairs: int
    alpha: float
    ell: float

    @property
    def compliant(self) -> bool:
        low = self.alpha * (1.0 - _RATIO_TOLERANCE)
        high = self.ell * (1.0 + _RATIO_TOLERANCE)
        return low <= self.min_monotonicity_ratio and self.max_lipschitz_ratio <= high

    def to_dict(self) -> dict[str, float | int | bool]:
        return {
            "min_monotonicity_ratio": self.min_monotonicity_ratio,
            "max_lipschitz_ratio": self.max_lipschitz_ratio,
            "n_pairs": self.n_pairs,
            "alpha": self.alpha,
            "ell": self.ell,
            "compliant": self.compliant,
        }


def make_quadratic(precision_diag, mean) -> PotentialSpec:
    precision = np.asarray(precision_diag, dtype=float).reshape(-1)
    center = np.asarray(mean, dtype=float).reshape(-1)
    if precision.size == 0:
        raise InvalidTargetError("precision vector is empty")
    if center.shape != precision.shape:
        raise InvalidTargetError(
            "precision and mean lengths differ",
            details={"precision": int(precision.size), "mean": int(center.size)},
        )
    if not np.all(np.isfinite(precision)) or np.any(precision <= 0):
        raise InvalidTargetError("all precisions must be positive and finite")

    precision.setflags(write=False)
    center.setflags(write=False)
    target = GaussianTarget(mean=center, precision_diag=precision)
    return PotentialSpec(
        alpha=float(precision.min()),
        ell=float(precision.max()),
        dim=int(precision.size),
        gradient=target.gradient,
        optimum=center,
        value=target.value,
        name="quadratic",
        gaussian=target,
    )


def gram_opnorm(features: np.ndarray, *, max_iter: int = 1000, tol: float = 1e-13, seed: int = 0) -> float:
    """Spectral norm of ``AᵀA`` by power iteration with a Rayleigh-quotient stopping rule."""
    gram = features.T @ features
    if not np.any(gram):
        return 0.0
    rng = np.random.default_rng(seed)
    vector = rng.standard_normal(gram.shape[0])
    vector /= np.linalg.norm(vector)
    estimate = 0.0
    for _ in range(max_iter):
        product = gram @ vector
        norm = float(np.linalg.norm(product))
        if norm == 0.0:
            return 0.0
        vector = product / norm
        updated = float(vector @ gram @ vector)
        if abs(updated - estimate) <= tol * updated:
            return updated
        estimate = updated
    return estimate


def make_logistic(alpha: float, features, labels) -> PotentialSpec:
    """Ridge-regularized logistic potential ``α/2‖x‖² + Σ log(1 + exp(−yᵢ⟨aᵢ, x⟩))``."""
    design = np.asarray(features, dtype=float)
    signs = np.asarray(labels, dtype=float).reshape(-1)
    if design.ndim != 2 or design.shape[0] != signs.shape[0]:
        raise InvalidTargetError("features must be an n x d matrix matching the labels")
    if not np.all(np.isin(signs, (-1.0, 1.0))):
        raise InvalidTargetError("labels must be -1 or +1")
    if not alpha > 0:
        raise InvalidTargetError("alpha must be positive", details={"alpha": alpha})

    design.setflags(write=False)
    signs.setflags(write=False)
    weighted = design * signs[:, None]

    def gradient(x: np.ndarray) -> np.ndarray:
        margins = weighted @ x
        return alpha * x - weighted.T @ expit(-margins)

    def value(x: np.ndarray) -> float:
        margins = weighted @ x
        return 0.5 * alpha * float(x @ x) + float(np.sum(np.logaddexp(0.0, -margins)))

    opnorm = gram_opnorm(design)
    logger.debug(f"[TARGET] logistic n={design.shape[0]} d={design.shape[1]} gram_opnorm={opnorm:.6g}")
    return PotentialSpec(
        alpha=float(alpha),
        ell=float(alpha + 0.25 * opnorm),
        dim=int(design.shape[1]),
        gradient=gradient,
        optimum=None,
        value=value,
        name="logistic",
    )


def synthesize_logistic_data(n_samples: int, dim: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    if n_samples < 1 or dim < 1:
        raise InvalidTargetError("logistic data needs at least one sample and one feature")
    rng = np.random.default_rng(seed)
    planted = rng.standard_normal(dim)
    features = rng.standard_normal((n_samples, dim)) / np.sqrt(dim)
    probabilities = expit(features @ planted)
    labels = np.where(rng.random(n_samples) < probabilities, 1.0, -1.0)
    return features, labels


def dump_logistic_csv(path: Path, features: np.ndarray, labels: np.ndarray) -> None:
    header = ",".join(["label", *[f"x{j}" for j in range(features.shape[1])]])
    table = np.column_stack([labels, features])
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, table, delimiter=",", header=header, comments="", fmt="%.17g")


def load_logistic_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    try:
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise InvalidTargetError(f"cannot read logistic data from {path}") from exc
    if table.shape[1] < 2:
        raise InvalidTargetError("logistic data needs a label column and at least one feature")
    return table[:, 1:], table[:, 0]


def _sample_ball(rng: np.random.Generator, n: int, dim: int, radius: float) -> np.ndarray:
    directions = rng.standard_normal((n, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.random(n) ** (1.0 / dim)
    return directions * radii[:, None]


def probe_assumption(spec: PotentialSpec, n_pairs: int, radius: float, seed: int) -> ProbeReport:
    """Probe strong monotonicity and Lipschitz continuity of the gradient on random pairs."""
    if spec.dim < 1:
        raise InvalidTargetError("cannot probe a zero-dimensional target")
    if n_pairs < 1:
        raise InvalidTargetError("n_pairs must be at least 1", details={"n_pairs": n_pairs})
    if not radius > 0:
        raise InvalidTargetError("radius must be positive", details={"radius": radius})

    rng = np.random.default_rng(seed)
    center = spec.optimum if spec.optimum is not None else np.zeros(spec.dim)
    min_monotone = np.inf
    max_lipschitz = 0.0
    for _ in range(n_pairs):
        while True:
            x, y = center + _sample_ball(rng, 2, spec.dim, radius)
            diff = x - y
            dist_sq = float(diff @ diff)
            if dist_sq > 0.0:
                break
        grad_diff = spec.gradient(x) - spec.gradient(y)
        min_monotone = min(min_monotone, float(grad_diff @ diff) / dist_sq)
        max_lipschitz = max(max_lipschitz, float(np.linalg.norm(grad_diff)) / np.sqrt(dist_sq))

    report = ProbeReport(
        min_monotonicity_ratio=float(min_monotone),
        max_lipschitz_ratio=float(max_lipschitz),
        n_pairs=n_pairs,
        alpha=spec.alpha,
        ell=spec.ell,
    )
    if not report.compliant:
        logger.warning(f"[PROBE] {spec.name} violates its declared constants: {report.to_dict()}")
    return report


__all__ = [
    "GaussianTarget",
    "PotentialSpec",
    "ProbeReport",
    "dump_logistic_csv",
    "gram_opnorm",
    "load_logistic_csv",
    "make_logistic",
    "make_quadratic",
    "probe_assumption",
    "synthesize_logistic_data",
]
