"""Streaming first and second moments with exact pairwise merging."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..util.errors import EstimatorMismatchError


@dataclass(frozen=True, slots=True, eq=False)
class MomentEstimate:
    """Sample count, mean and centered second-moment sum ``m2``.

    ``m2`` is ``d x d`` in full mode and a d-vector of per-coordinate sums in diagonal mode.
    """

    n: int
    mean: np.ndarray
    m2: np.ndarray
    diagonal: bool = False

    @classmethod
    def empty(cls, dim: int, *, diagonal: bool = False) -> MomentEstimate:
        m2 = np.zeros(dim) if diagonal else np.zeros((dim, dim))
        return cls(n=0, mean=np.zeros(dim), m2=m2, diagonal=diagonal)

    @classmethod
    def from_samples(cls, samples, *, diagonal: bool = False) -> MomentEstimate:
        data = np.asarray(samples, dtype=float)
        if data.ndim != 2:
            raise EstimatorMismatchError("samples must be an n x d array", details={"shape": list(data.shape)})
        if data.shape[0] == 0:
            return cls.empty(data.shape[1], diagonal=diagonal)
        mean = data.mean(axis=0)
        centered = data - mean
        m2 = np.sum(centered * centered, axis=0) if diagonal else centered.T @ centered
        return cls(n=int(data.shape[0]), mean=mean, m2=m2, diagonal=diagonal)

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    @property
    def cov(self) -> np.ndarray:
        if self.n < 2:
            return np.zeros_like(self.m2)
        if self.diagonal:
            return self.m2 / (self.n - 1)
        cov = self.m2 / (self.n - 1)
        return 0.5 * (cov + cov.T)

    @property
    def cov_diag(self) -> np.ndarray:
        cov = self.cov
        return cov if self.diagonal else np.diag(cov).copy()

    def merge(self, other: MomentEstimate) -> MomentEstimate:
        """Combine two disjoint sample sets (Chan et al. pairwise update)."""
        if self.diagonal != other.diagonal or self.dim != other.dim:
            raise EstimatorMismatchError("cannot merge estimates of different shape or mode")
        if other.n == 0:
            return self
        if self.n == 0:
            return other
        total = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.n / total)
        weight = self.n * other.n / total
        cross = delta * delta if self.diagonal else np.outer(delta, delta)
        return MomentEstimate(n=total, mean=mean, m2=self.m2 + other.m2 + cross * weight, diagonal=self.diagonal)

    def std_errors(self) -> tuple[np.ndarray, np.ndarray]:
        """Standard errors of the mean and of the covariance entries under a Gaussian approximation."""
        if self.n < 2:
            return np.full(self.dim, np.inf), np.full(self.m2.shape, np.inf)
        cov = self.cov
        variances = cov if self.diagonal else np.diag(cov)
        mean_se = np.sqrt(variances / self.n)
        if self.diagonal:
            cov_se = np.sqrt(2.0 * variances**2 / (self.n - 1))
        else:
            cov_se = np.sqrt((np.outer(variances, variances) + cov**2) / (self.n - 1))
        return mean_se, cov_se


__all__ = ["MomentEstimate"]
