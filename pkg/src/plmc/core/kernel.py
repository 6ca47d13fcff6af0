"""Exact per-coordinate 2x2 discretization kernels for underdamped Langevin dynamics.

Every matrix of the underdamped update is block-scalar across coordinates, so a kernel is
stored as 2x2 blocks acting on a ``(2, d)`` state whose rows are position and velocity.
With ``x = γh`` and ``e = exp(-x)``:

* ``a = [[1, (1-e)/γ], [0, e]]``
* ``g_col = [(x - (1-e))/γ², (1-e)/γ]`` (second column of ``G`` is zero)
* ``c = Γ²`` is the exact transition covariance of the Ornstein-Uhlenbeck part.

Entries that subtract nearly equal exponentials are evaluated by Taylor series below
``SERIES_THRESHOLD``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from threading import RLock

import numpy as np
from cachetools import LRUCache

from ..util.errors import ConditioningError, InvalidCovarianceError, InvalidKernelError

logger = logging.getLogger(__name__)

SERIES_THRESHOLD = 0.1
SERIES_TERMS = 24
CLAMP_THRESHOLD = 30.0
PSD_FLOOR = 1e-14
SYMMETRY_TOLERANCE = 1e-10


@dataclass(frozen=True, slots=True, eq=False)
class _ExpCombination:
    """``(Σ_k poly[k]·x^k + Σ_r weights[r]·(1 - exp(-r·x))) / γ^gamma_power``."""

    poly: Mapping[int, float]
    weights: Mapping[int, float]
    gamma_power: int

    def coefficients(self, terms: int) -> list[float]:
        coeffs = []
        for n in range(terms + 1):
            total = self.poly.get(n, 0.0)
            if n >= 1:
                for rate, weight in self.weights.items():
                    total += weight * (-1.0) ** (n + 1) * rate**n / math.factorial(n)
            coeffs.append(total)
        return coeffs

    def closed_form(self, x: float) -> float:
        total = sum(coef * x**power for power, coef in self.poly.items())
        for rate, weight in self.weights.items():
            total += weight * (1.0 if x > CLAMP_THRESHOLD else -math.expm1(-rate * x))
        return total

    def evaluate(self, x: float, gamma: float) -> float:
        if x < SERIES_THRESHOLD:
            value = _horner(_SERIES_CACHE[self], x)
        else:
            value = self.closed_form(x)
        return value / gamma**self.gamma_power

    def reference(self, x: float, gamma: float, terms: int) -> float:
        """Long Taylor series with exactly combined rational coefficients; an accuracy oracle."""
        parts = []
        for n in range(terms + 1):
            coef = Fraction(self.poly.get(n, 0.0))
            if n >= 1:
                for rate, weight in self.weights.items():
                    coef += Fraction(weight) * (-1) ** (n + 1) * Fraction(rate) ** n / math.factorial(n)
            if coef:
                parts.append(float(coef) * x**n)
        return math.fsum(parts) / gamma**self.gamma_power


def _horner(coeffs: list[float], x: float) -> float:
    total = 0.0
    for coef in reversed(coeffs):
        total = total * x + coef
    return total


# unprimed entries
_A01 = _ExpCombination({}, {1: 1.0}, 1)
_A11 = _ExpCombination({0: 1.0}, {1: -1.0}, 0)
_G0 = _ExpCombination({1: 1.0}, {1: -1.0}, 2)
_G1 = _ExpCombination({}, {1: 1.0}, 1)
_C00 = _ExpCombination({1: 2.0}, {1: -4.0, 2: 1.0}, 2)
_C01 = _ExpCombination({}, {1: 2.0, 2: -1.0}, 1)
_C11 = _ExpCombination({}, {2: 1.0}, 0)

# primed entries (M-coordinates)
_AP_DIAG = _ExpCombination({0: 1.0}, {1: -0.5}, 0)
_AP_OFF = _ExpCombination({}, {1: 0.5}, 0)
_GP1 = _ExpCombination({1: 1.0}, {1: 1.0}, 2)
_CP01 = _ExpCombination({1: 2.0}, {2: -1.0}, 2)
_CP11 = _ExpCombination({1: 2.0}, {1: 4.0, 2: 1.0}, 2)

_ALL_ENTRIES = (_A01, _A11, _G0, _G1, _C00, _C01, _C11, _AP_DIAG, _AP_OFF, _GP1, _CP01, _CP11)
_SERIES_CACHE = {entry: entry.coefficients(SERIES_TERMS) for entry in _ALL_ENTRIES}


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, slots=True, eq=False)
class KernelBlocks:
    h: float
    gamma: float
    a: np.ndarray
    g_col: np.ndarray
    c: np.ndarray
    c_sqrt: np.ndarray

    @property
    def g(self) -> np.ndarray:
        block = np.zeros((2, 2))
        block[:, 0] = self.g_col
        return block


@dataclass(frozen=True, slots=True, eq=False)
class PrimedKernelBlocks:
    h: float
    gamma: float
    a: np.ndarray
    g_col: np.ndarray
    c: np.ndarray
    m: np.ndarray
    m_inv: np.ndarray

    @property
    def g(self) -> np.ndarray:
        block = np.zeros((2, 2))
        block[:, 0] = self.g_col
        return block


class KernelCache:
    """Thread-safe LRU cache of kernel blocks keyed by ``(h, gamma)``."""

    def __init__(self, max_size: int = 4096) -> None:
        self._max_size = max_size
        self._cache: LRUCache[tuple[str, float, float], KernelBlocks | PrimedKernelBlocks] | None = (
            LRUCache(maxsize=max_size) if max_size > 0 else None
        )
        self._lock = RLock()
        self._hits = 0
        self._misses = 0

    def get_or_build(self, kind: str, h: float, gamma: float, builder):
        if self._cache is None:
            return builder(h, gamma)
        key = (kind, h, gamma)
        with self._lock:
            cached = self._cache.get(key)
            if cached is not None:
                self._hits += 1
                return cached
            self._misses += 1
        blocks = builder(h, gamma)
        with self._lock:
            self._cache[key] = blocks
        return blocks

    def stats(self) -> dict[str, int]:
        with self._lock:
            return {
                "hits": self._hits,
                "misses": self._misses,
                "size": len(self._cache) if self._cache is not None else 0,
                "max_size": self._max_size,
            }

    def clear(self) -> None:
        with self._lock:
            if self._cache is not None:
                self._cache.clear()
            self._hits = 0
            self._misses = 0


_kernel_cache = KernelCache()


def configure_kernel_cache(max_size: int) -> KernelCache:
    global _kernel_cache
    _kernel_cache = KernelCache(max_size=max_size)
    logger.debug(f"[KERNEL] cache configured with max_size={max_size}")
    return _kernel_cache


def kernel_cache() -> KernelCache:
    return _kernel_cache


def _validate(h: float, gamma: float) -> None:
    if not (math.isfinite(h) and h > 0):
        raise InvalidKernelError("step h must be positive and finite", details={"h": h})
    if not (math.isfinite(gamma) and gamma > 0):
        raise InvalidKernelError("friction gamma must be positive and finite", details={"gamma": gamma})


def m_block(gamma: float) -> np.ndarray:
    return _frozen([[1.0, 0.0], [1.0, 2.0 / gamma]])


def m_inverse_block(gamma: float) -> np.ndarray:
    return _frozen([[1.0, 0.0], [-gamma / 2.0, gamma / 2.0]])


def sqrt_block(c: np.ndarray) -> np.ndarray:
    """Principal square root of a symmetric PSD 2x2 block via trace and determinant."""
    block = np.asarray(c, dtype=float)
    if block.shape != (2, 2):
        raise InvalidCovarianceError("expected a 2x2 block", details={"shape": list(block.shape)})
    scale = max(1.0, float(np.abs(block).max()))
    if abs(block[0, 1] - block[1, 0]) > SYMMETRY_TOLERANCE * scale:
        raise InvalidCovarianceError(
            "block is not symmetric", details={"c01": float(block[0, 1]), "c10": float(block[1, 0])}
        )
    p, q, r = float(block[0, 0]), 0.5 * float(block[0, 1] + block[1, 0]), float(block[1, 1])
    trace = p + r
    det = p * r - q * q
    # smallest eigenvalue, written to avoid cancellation when det is tiny
    half_gap = math.hypot(0.5 * (p - r), q)
    top = 0.5 * trace + half_gap
    bottom = det / top if top > 0 else 0.5 * trace - half_gap
    if bottom < -PSD_FLOOR * max(1.0, abs(top)):
        raise InvalidCovarianceError("block is not positive semidefinite", details={"min_eigenvalue": bottom})
    root_det = math.sqrt(max(det, 0.0))
    denom_sq = trace + 2.0 * root_det
    if denom_sq <= 0.0:
        return np.zeros((2, 2))
    denom = math.sqrt(denom_sq)
    return np.array([[(p + root_det) / denom, q / denom], [q / denom, (r + root_det) / denom]])


def _build_kernel(h: float, gamma: float) -> KernelBlocks:
    x = gamma * h
    a01, a11 = _A01.evaluate(x, gamma), _A11.evaluate(x, gamma)
    g0, g1 = _G0.evaluate(x, gamma), _G1.evaluate(x, gamma)
    c00, c01, c11 = _C00.evaluate(x, gamma), _C01.evaluate(x, gamma), _C11.evaluate(x, gamma)
    c = _frozen([[c00, c01], [c01, c11]])
    root = sqrt_block(c)
    root.setflags(write=False)
    return KernelBlocks(
        h=h,
        gamma=gamma,
        a=_frozen([[1.0, a01], [0.0, a11]]),
        g_col=_frozen([g0, g1]),
        c=c,
        c_sqrt=root,
    )


def _build_primed_kernel(h: float, gamma: float) -> PrimedKernelBlocks:
    x = gamma * h
    diag, off = _AP_DIAG.evaluate(x, gamma), _AP_OFF.evaluate(x, gamma)
    c00, c01, c11 = _C00.evaluate(x, gamma), _CP01.evaluate(x, gamma), _CP11.evaluate(x, gamma)
    return PrimedKernelBlocks(
        h=h,
        gamma=gamma,
        a=_frozen([[diag, off], [off, diag]]),
        g_col=_frozen([_G0.evaluate(x, gamma), _GP1.evaluate(x, gamma)]),
        c=_frozen([[c00, c01], [c01, c11]]),
        m=m_block(gamma),
        m_inv=m_inverse_block(gamma),
    )


def build_kernel(h: float, gamma: float) -> KernelBlocks:
    _validate(h, gamma)
    return _kernel_cache.get_or_build("plain", float(h), float(gamma), _build_kernel)


def build_primed_kernel(h: float, gamma: float) -> PrimedKernelBlocks:
    _validate(h, gamma)
    return _kernel_cache.get_or_build("primed", float(h), float(gamma), _build_primed_kernel)


def identity_kernel(gamma: float) -> KernelBlocks:
    """Zero-time kernel: ``a = I``, ``g = 0``, ``c = 0``."""
    zeros = _frozen([[0.0, 0.0], [0.0, 0.0]])
    return KernelBlocks(
        h=0.0,
        gamma=gamma,
        a=_frozen([[1.0, 0.0], [0.0, 1.0]]),
        g_col=_frozen([0.0, 0.0]),
        c=zeros,
        c_sqrt=zeros,
    )


def kernel_at(steps: int, h: float, gamma: float) -> KernelBlocks:
    """Kernel over ``steps`` inner steps of size ``h``; the identity kernel for ``steps == 0``."""
    if steps == 0:
        return identity_kernel(gamma)
    return build_kernel(steps * h, gamma)


def _kernel_or_identity(h: float, gamma: float) -> KernelBlocks:
    return identity_kernel(gamma) if h == 0 else build_kernel(h, gamma)


def _primed_or_identity(h: float, gamma: float) -> PrimedKernelBlocks:
    if h != 0:
        return build_primed_kernel(h, gamma)
    zeros = _frozen([[0.0, 0.0], [0.0, 0.0]])
    return PrimedKernelBlocks(
        h=0.0,
        gamma=gamma,
        a=_frozen([[1.0, 0.0], [0.0, 1.0]]),
        g_col=_frozen([0.0, 0.0]),
        c=zeros,
        m=m_block(gamma),
        m_inv=m_inverse_block(gamma),
    )


def semigroup_residual(h1: float, h2: float, gamma: float, *, primed: bool = False) -> tuple[float, float]:
    """Residuals of ``A_{h1}A_{h2} = A_{h1+h2}`` and ``A_{h2}G_{h1} + G_{h2} = G_{h1+h2}``."""
    if h1 < 0 or h2 < 0:
        raise InvalidKernelError("steps must be non-negative", details={"h1": h1, "h2": h2})
    build = _primed_or_identity if primed else _kernel_or_identity
    first, second, total = build(h1, gamma), build(h2, gamma), build(h1 + h2, gamma)
    res_a = float(np.linalg.norm(first.a @ second.a - total.a))
    res_g = float(np.linalg.norm(second.a @ first.g_col + second.g_col - total.g_col))
    return res_a, res_g


def covariance_semigroup_residual(h1: float, h2: float, gamma: float) -> float:
    """Relative residual of ``Γ²_{h1+h2} = A_{h2}Γ²_{h1}A_{h2}ᵀ + Γ²_{h2}``."""
    first, second, total = (_kernel_or_identity(h, gamma) for h in (h1, h2, h1 + h2))
    composed = second.a @ first.c @ second.a.T + second.c
    scale = float(np.linalg.norm(total.c)) or 1.0
    return float(np.linalg.norm(composed - total.c)) / scale


def conjugation_residuals(h: float, gamma: float) -> tuple[float, float, float]:
    """``(‖m a m⁻¹ − a'‖_F, ‖m c mᵀ − c'‖_F / ‖c'‖_F, ‖m g − g'‖)``."""
    plain, primed = build_kernel(h, gamma), build_primed_kernel(h, gamma)
    m, m_inv = primed.m, primed.m_inv
    res_a = float(np.linalg.norm(m @ plain.a @ m_inv - primed.a))
    res_c = float(np.linalg.norm(m @ plain.c @ m.T - primed.c)) / float(np.linalg.norm(primed.c))
    res_g = float(np.linalg.norm(m @ plain.g_col - primed.g_col))
    return res_a, res_c, res_g


def reference_covariance(h: float, gamma: float, *, terms: int = 200) -> np.ndarray:
    """Unprimed ``c`` from a long series summed exactly; accuracy oracle for small ``γh``."""
    _validate(h, gamma)
    x = gamma * h
    c00, c01, c11 = (entry.reference(x, gamma, terms) for entry in (_C00, _C01, _C11))
    return np.array([[c00, c01], [c01, c11]])


def gamma_prime_eigenvalues(h: float, gamma: float) -> tuple[float, float]:
    """Eigenvalues ``E1 <= E2`` of ``Γ'²``; ``E1`` is taken as ``det / E2`` to avoid cancellation."""
    c = build_primed_kernel(h, gamma).c
    p, q, r = float(c[0, 0]), float(c[0, 1]), float(c[1, 1])
    top = 0.5 * (p + r) + math.hypot(0.5 * (p - r), q)
    det = p * r - q * q
    return det / top, top


def gamma_prime_series(h: float, gamma: float) -> tuple[float, float]:
    """Third-order expansions of ``exp(-2γh)·a/γ²`` and ``exp(-2γh)·b/γ²``."""
    common = 4.0 * h / gamma - 2.0 * h * h
    return common + 4.0 * gamma * h**3 / 3.0, common + 7.0 * gamma * h**3 / 6.0


def gamma_prime_eigen_expansion_check(gamma: float, h_grid) -> float:
    """Max over the grid of ``|E2 − series| / (γ²h⁴)`` with series ``= a-series + b-series``."""
    worst = 0.0
    for h in h_grid:
        if gamma * h >= 0.1:
            raise InvalidKernelError("expansion check needs γh < 0.1", details={"h": h, "gamma": gamma})
        _, top = gamma_prime_eigenvalues(h, gamma)
        a_series, b_series = gamma_prime_series(h, gamma)
        worst = max(worst, abs(top - (a_series + b_series)) / (gamma**2 * h**4))
    return worst


def calibrate_gamma_prime_constant(gamma: float = 1.0, xs=None) -> float:
    """Smallest ``C`` with ``‖Γ'_h‖² <= C·h/γ`` over ``γh`` in ``xs`` (default ``[1e-6, 0.5]``)."""
    points = np.geomspace(1e-6, 0.5, 200) if xs is None else np.asarray(xs, dtype=float)
    worst = 0.0
    for x in points:
        h = float(x) / gamma
        _, top = gamma_prime_eigenvalues(h, gamma)
        worst = max(worst, top * gamma / h)
    return worst


def whitened_drift_gram(h: float, gamma: float) -> np.ndarray:
    """``G'ᵀ (Γ'²)⁻¹ G'`` via the explicit 2x2 adjugate."""
    if h < 1e-10:
        raise ConditioningError("Γ'² is numerically singular at this step", details={"h": h})
    primed = build_primed_kernel(h, gamma)
    p, q, r = float(primed.c[0, 0]), float(primed.c[0, 1]), float(primed.c[1, 1])
    det = p * r - q * q
    if not det > 0:
        raise ConditioningError("Γ'² is not invertible", details={"h": h, "gamma": gamma, "det": det})
    g0, g1 = float(primed.g_col[0]), float(primed.g_col[1])
    gram = np.zeros((2, 2))
    gram[0, 0] = (g0 * g0 * r - 2.0 * g0 * g1 * q + g1 * g1 * p) / det
    return gram


def primed_form_discrepancies(h: float, gamma: float) -> dict[str, float]:
    """Distance of alternative closed forms for the primed blocks from the conjugated kernels.

    ``g_prime`` compares the first column of ``G'`` written in elementary functions,
    ``g_prime_taylor`` its truncated expansion ``(h²/2, 2h/γ − h²/2)`` and ``gamma_prime_sq`` a
    form of ``Γ'²`` built on ``exp(+2γh)``, all against ``m·G`` and ``m·Γ²·mᵀ``.
    """
    _validate(h, gamma)
    x = gamma * h
    e1 = math.exp(-x)
    plain = build_kernel(h, gamma)
    m = m_block(gamma)
    g_true = m @ plain.g_col
    c_true = m @ plain.c @ m.T

    g_elementary = np.array([(x - (1 - e1)) / gamma**2, (x + (1 - e1)) / gamma**2])
    g_taylor = np.array([h * h / 2, 2 * h / gamma - h * h / 2])
    if 2 * x > 700:
        return {
            "g_prime": float(np.linalg.norm(g_elementary - g_true)),
            "g_prime_taylor": math.inf,
            "gamma_prime_sq": math.inf,
        }
    grow = 1.0 - math.exp(2 * x)
    diag_minus = (4 * (1 - e1) - grow + 2 * x) / gamma**2
    diag_plus = (4 * (1 - e1) + grow + 2 * x) / gamma**2
    off = (2 * x - grow) / gamma**2
    c_alternative = np.array([[diag_minus, off], [off, diag_plus]])
    return {
        "g_prime": float(np.linalg.norm(g_elementary - g_true)),
        "g_prime_taylor": float(np.linalg.norm(g_taylor - g_true)),
        "gamma_prime_sq": float(np.linalg.norm(c_alternative - c_true)),
    }


__all__ = [
    "KernelBlocks",
    "KernelCache",
    "PrimedKernelBlocks",
    "build_kernel",
    "build_primed_kernel",
    "calibrate_gamma_prime_constant",
    "configure_kernel_cache",
    "conjugation_residuals",
    "covariance_semigroup_residual",
    "gamma_prime_eigen_expansion_check",
    "gamma_prime_eigenvalues",
    "gamma_prime_series",
    "identity_kernel",
    "kernel_at",
    "kernel_cache",
    "m_block",
    "m_inverse_block",
    "primed_form_discrepancies",
    "reference_covariance",
    "semigroup_residual",
    "sqrt_block",
    "whitened_drift_gram",
]
