"""Log-log fits of error against cost and of cost against accuracy."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..util.errors import InvalidCurveError
from .wasserstein import W2Estimate

MIN_POINTS = 3


@dataclass(frozen=True, slots=True)
class CurveFit:
    slope: float
    intercept: float
    residual: float
    n_points: int


def _loglog_fit(xs: Sequence[float], ys: Sequence[float]) -> CurveFit:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidCurveError("x and y must be equal-length sequences")
    if x.size < MIN_POINTS:
        raise InvalidCurveError(f"need at least {MIN_POINTS} points", details={"n_points": int(x.size)})
    if np.any(~np.isfinite(x)) or np.any(~np.isfinite(y)) or np.any(x <= 0) or np.any(y <= 0):
        raise InvalidCurveError("all values must be positive and finite")
    if np.unique(x).size != x.size:
        raise InvalidCurveError("x values must be distinct")
    log_x, log_y = np.log(x), np.log(y)
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residual = float(np.sum((log_y - (slope * log_x + intercept)) ** 2))
    return CurveFit(slope=float(slope), intercept=float(intercept), residual=residual, n_points=int(x.size))


def error_curve(points: Sequence[tuple[float, W2Estimate | float]]) -> CurveFit:
    """OLS of ``log value_sq`` on ``log gradient_calls``."""
    xs = [float(calls) for calls, _ in points]
    ys = [est.value_sq if isinstance(est, W2Estimate) else float(est) for _, est in points]
    return _loglog_fit(xs, ys)


def fit_exponent(epsilons: Sequence[float], calls: Sequence[float]) -> CurveFit:
    """OLS of ``log calls`` on ``log(1/ε)``; the slope is the complexity exponent."""
    inverse = [1.0 / eps if eps > 0 else -1.0 for eps in epsilons]
    return _loglog_fit(inverse, calls)


__all__ = ["CurveFit", "error_curve", "fit_exponent"]
