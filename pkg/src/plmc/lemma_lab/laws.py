"""One-dimensional laws with numerically invertible distribution functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ..util.errors import PreconditionError, QuadratureError

BISECTION_TOLERANCE = 1e-13
MAX_BISECTION_STEPS = 200
_LAW_TOLERANCE = 1e-12


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, slots=True, eq=False)
class GaussianMixtureLaw:
    """Finite mixture ``Σ w_k N(μ_k, σ_k²)``."""

    weights: np.ndarray
    means: np.ndarray
    scales: np.ndarray

    def __post_init__(self) -> None:
        if not (self.weights.shape == self.means.shape == self.scales.shape) or self.weights.size == 0:
            raise PreconditionError("mixture weights, means and scales must be non-empty and aligned")
        if np.any(self.weights < 0) or abs(float(self.weights.sum()) - 1.0) > _LAW_TOLERANCE:
            raise PreconditionError("mixture weights must be non-negative and sum to one")
        if np.any(self.scales <= 0):
            raise PreconditionError("mixture scales must be positive")

    @classmethod
    def build(cls, weights, means, scales) -> GaussianMixtureLaw:
        means = _frozen(means)
        return cls(
            weights=_frozen(weights),
            means=means,
            scales=_frozen(np.broadcast_to(np.asarray(scales, dtype=float), means.shape)),
        )

    def cdf(self, x) -> np.ndarray:
        points = np.asarray(x, dtype=float)[..., None]
        return np.sum(self.weights * ndtr((points - self.means) / self.scales), axis=-1)

    def sf(self, x) -> np.ndarray:
        points = np.asarray(x, dtype=float)[..., None]
        return np.sum(self.weights * ndtr((self.means - points) / self.scales), axis=-1)

    def quantile_at_z(self, z) -> np.ndarray:
        """``Q(Φ(z))``, solving the lower or upper tail equation by bracketed bisection.

        Component ``k`` has its ``Φ(z)`` quantile at ``μ_k + σ_k z``, so the mixture quantile lies
        between the smallest and largest of these.
        """
        nodes = np.asarray(z, dtype=float)
        if self.means.size == 1:
            return self.means[0] + self.scales[0] * nodes
        candidates = self.means + self.scales * nodes[..., None]
        low = candidates.min(axis=-1)
        high = candidates.max(axis=-1)
        lower_tail = nodes <= 0
        target = np.where(lower_tail, ndtr(nodes), ndtr(-nodes))
        for _ in range(MAX_BISECTION_STEPS):
            width = high - low
            if np.all(width <= BISECTION_TOLERANCE * np.maximum(1.0, np.abs(low))):
                break
            middle = 0.5 * (low + high)
            below = np.where(lower_tail, self.cdf(middle) < target, self.sf(middle) > target)
            low = np.where(below, middle, low)
            high = np.where(below, high, middle)
        else:
            raise QuadratureError("mixture quantile bisection did not converge")
        return 0.5 * (low + high)

    def mean(self) -> float:
        return float(np.dot(self.weights, self.means))

    def variance(self) -> float:
        second = float(np.dot(self.weights, self.scales**2 + self.means**2))
        return second - self.mean() ** 2


def normal_law(mean: float = 0.0, scale: float = 1.0) -> GaussianMixtureLaw:
    return GaussianMixtureLaw.build([1.0], [mean], [scale])


@dataclass(frozen=True, slots=True, eq=False)
class PerturbationSpec:
    """Discrete law of a one-dimensional, mean-zero perturbation bounded by ``beta``."""

    support: np.ndarray
    probs: np.ndarray
    beta: float

    def __post_init__(self) -> None:
        if self.support.shape != self.probs.shape or self.support.size == 0:
            raise PreconditionError("support and probabilities must be non-empty and aligned")
        if self.beta < 0:
            raise PreconditionError("beta must be non-negative", details={"beta": self.beta})
        if np.any(self.probs < 0) or abs(float(self.probs.sum()) - 1.0) > _LAW_TOLERANCE:
            raise PreconditionError("probabilities must be non-negative and sum to one")
        if abs(float(np.dot(self.probs, self.support))) > _LAW_TOLERANCE * max(1.0, self.beta):
            raise PreconditionError("perturbation must have mean zero")
        if float(np.abs(self.support).max()) > self.beta * (1.0 + _LAW_TOLERANCE):
            raise PreconditionError("support exceeds beta", details={"beta": self.beta})

    @classmethod
    def build(cls, support, probs, beta: float | None = None) -> PerturbationSpec:
        points = _frozen(support)
        bound = float(np.abs(points).max()) if beta is None else float(beta)
        return cls(support=points, probs=_frozen(probs), beta=bound)

    @classmethod
    def two_point(cls, beta: float) -> PerturbationSpec:
        """``±beta`` with probability one half each."""
        if beta == 0:
            return cls.build([0.0], [1.0], 0.0)
        return cls.build([-beta, beta], [0.5, 0.5], beta)

    @property
    def nu(self) -> float:
        return float(np.dot(self.probs, self.support**2))

    def shifted_mixture(self, scale: float = 1.0, shrink: float = 1.0) -> GaussianMixtureLaw:
        """Law of ``scale·Z + shrink·V`` for standard normal ``Z`` independent of ``V``."""
        return GaussianMixtureLaw.build(self.probs, shrink * self.support, scale)


__all__ = ["GaussianMixtureLaw", "PerturbationSpec", "normal_law"]
