"""Certificates for W2 bounds between a Gaussian and its bounded one-dimensional perturbations.

Orthogonal to the perturbation direction both laws coincide, so every check runs on the
one-dimensional marginal along it.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

from ..util.errors import PreconditionError
from .laws import PerturbationSpec, normal_law
from .quadrature import DEFAULT_TAIL_U, w2_1d_quantile

logger = logging.getLogger(__name__)

DEFAULT_N_QUAD = 100_000
DEFAULT_BETA_GRID = (0.0, 0.01, 0.05, 0.1, 0.3, 1.0, 2.0)
DEFAULT_ZHAI_N = 10.0


@dataclass(frozen=True, slots=True)
class W2Certificate:
    name: str
    beta: float
    nu: float
    lhs: float
    rhs: float
    quadrature_error_bound: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return bool(self.margin >= -self.quadrature_error_bound)

    def to_row(self) -> dict[str, float | str | bool]:
        return {
            "certificate": self.name,
            "beta": self.beta,
            "nu": self.nu,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "error_bound": self.quadrature_error_bound,
            "pass": self.passed,
        }


def _large_beta(beta: float) -> bool:
    return 5.0 * beta * beta > 1.0


def lemma1_rhs(nu: float, beta: float) -> float:
    return 5.5 * nu * nu + (2.0 * nu if _large_beta(beta) else 0.0)


def lemma_a2_rhs(nu: float, beta: float) -> float:
    return 5.0 * nu * nu + (2.0 * nu if _large_beta(beta) else 0.0)


def certify_lemma1(
    spec: PerturbationSpec, n_quad: int = DEFAULT_N_QUAD, *, tail_u: float = DEFAULT_TAIL_U
) -> W2Certificate:
    """``W2²(N(0,1), N(0,1) * V) ≤ 11/2·ν² + 1{5β² > 1}·2ν``."""
    result = w2_1d_quantile(normal_law(), spec.shifted_mixture(), n_quad, tail_u=tail_u)
    return W2Certificate(
        name="lemma1",
        beta=spec.beta,
        nu=spec.nu,
        lhs=result.value,
        rhs=lemma1_rhs(spec.nu, spec.beta),
        quadrature_error_bound=result.error_bound,
    )


def certify_lemmaA2(
    spec: PerturbationSpec, n_quad: int = DEFAULT_N_QUAD, *, tail_u: float = DEFAULT_TAIL_U
) -> W2Certificate:
    """``W2²(N(0, 1+ν), N(0,1) * V) ≤ 5ν² + 1{5β² > 1}·2ν``."""
    nu = spec.nu
    result = w2_1d_quantile(normal_law(0.0, math.sqrt(1.0 + nu)), spec.shifted_mixture(), n_quad, tail_u=tail_u)
    return W2Certificate(
        name="lemmaA2",
        beta=spec.beta,
        nu=nu,
        lhs=result.value,
        rhs=lemma_a2_rhs(nu, spec.beta),
        quadrature_error_bound=result.error_bound,
    )


def certify_zhai(
    beta: float,
    n_param: float,
    k: int = 1,
    n_quad: int = DEFAULT_N_QUAD,
    *,
    sigma: float | None = None,
    tail_u: float = DEFAULT_TAIL_U,
) -> W2Certificate:
    """``W2(Z_1, Z_{1-1/n} + Y) ≤ 5√k·β / n^{3/2}`` for the two-point ``Y = ±√(Σ/n)``.

    ``Z_t ~ N(0, tΣ)``; ``Σ`` defaults to ``β²`` so that ``‖Y‖ = β/√n``. The certificate is on W2
    itself: ``lhs`` is the square root of the quadrature value and the error bound is propagated.
    """
    if k != 1:
        raise PreconditionError("only the one-dimensional case is certified", details={"k": k})
    if beta < 0 or n_param <= 0:
        raise PreconditionError("need beta >= 0 and n > 0", details={"beta": beta, "n": n_param})
    rhs = 5.0 * math.sqrt(k) * beta / n_param**1.5
    cov = beta * beta if sigma is None else float(sigma)
    if cov < 0 or cov > beta * beta * (1.0 + 1e-12):
        raise PreconditionError("sigma must lie in [0, beta²] for Y to respect the bound", details={"sigma": cov})
    if cov == 0.0:
        return W2Certificate(name="zhai", beta=beta, nu=0.0, lhs=0.0, rhs=rhs, quadrature_error_bound=0.0)
    if n_param < 5.0 * beta * beta / cov:
        raise PreconditionError(
            "n is below 5·beta²/sigma_min²", details={"n": n_param, "required": 5.0 * beta * beta / cov}
        )

    root = math.sqrt(cov)
    step = PerturbationSpec.two_point(math.sqrt(cov / n_param))
    reference = normal_law(0.0, root)
    perturbed = step.shifted_mixture(scale=root * math.sqrt(1.0 - 1.0 / n_param))
    result = w2_1d_quantile(reference, perturbed, n_quad, tail_u=tail_u)
    lhs = math.sqrt(result.value)
    error = result.error_bound / (math.sqrt(result.value + result.error_bound) + lhs) if result.error_bound else 0.0
    return W2Certificate(name="zhai", beta=beta, nu=cov / n_param, lhs=lhs, rhs=rhs, quadrature_error_bound=error)


def coupling_grid(
    betas: Sequence[float] = DEFAULT_BETA_GRID,
    n_quad: int = DEFAULT_N_QUAD,
    *,
    n_param: float = DEFAULT_ZHAI_N,
    tail_u: float = DEFAULT_TAIL_U,
) -> list[W2Certificate]:
    """All three certificates for two-point perturbations ``±β`` over the grid."""
    certificates = []
    for beta in betas:
        spec = PerturbationSpec.two_point(float(beta))
        certificates.append(certify_lemma1(spec, n_quad, tail_u=tail_u))
        certificates.append(certify_lemmaA2(spec, n_quad, tail_u=tail_u))
        certificates.append(certify_zhai(float(beta), n_param, 1, n_quad, tail_u=tail_u))
    failed = [c for c in certificates if not c.passed]
    if failed:
        logger.warning(f"[VERIFY] {len(failed)} coupling certificates failed: {[c.to_row() for c in failed]}")
    return certificates


__all__ = [
    "DEFAULT_BETA_GRID",
    "DEFAULT_N_QUAD",
    "W2Certificate",
    "certify_lemma1",
    "certify_lemmaA2",
    "certify_zhai",
    "coupling_grid",
    "lemma1_rhs",
    "lemma_a2_rhs",
]
