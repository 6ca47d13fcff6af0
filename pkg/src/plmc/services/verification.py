"""Verification suites: kernel identities, noise bridge laws, coupling certificates, target probes."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from typing import Any

import numpy as np

from ..contracts.experiment import TargetConfig
from ..contracts.reports import RunReport, VerificationTable
from ..core import kernel as kernels
from ..core.noise_bridge import (
    assemble_overdamped_covariance,
    assemble_underdamped_covariance,
    brute_force_underdamped_covariance,
    interpolant_points,
    max_partial_sum_diag,
    sample_index_set,
    sample_overdamped_bridge,
    sample_underdamped_bridge,
)
from ..core.potential import probe_assumption
from ..core.rng import RngStream
from ..lemma_lab.certificates import DEFAULT_BETA_GRID, DEFAULT_N_QUAD, coupling_grid
from ..shared.enums import InterpolantConvention, VerifySuite
from ..util.errors import UnknownSelectorError
from .targets import build_target

logger = logging.getLogger(__name__)

DEFAULT_H_GRID = tuple(float(h) for h in np.geomspace(1e-4, 1e-1, 10))
WHITENED_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-12
REFERENCE_TOLERANCE = 1e-10
EXPANSION_LIMIT = 0.1
GAMMA_PRIME_CONSTANT_LIMIT = 8.0
Z_LIMIT = 5.0
BRUTE_FORCE_TOLERANCE = 1e-10

KERNEL_COLUMNS = [
    "h",
    "gamma",
    "whitened_rel_err",
    "semigroup_a",
    "semigroup_g",
    "semigroup_cov",
    "semigroup_primed",
    "conjugation_a",
    "conjugation_c",
    "conjugation_g",
    "reference_rel_err",
    "e2_gamma_over_h",
    "mean_eig_gamma_over_h",
    "expansion_remainder",
    "g_prime_alternative",
    "gamma_prime_sq_alternative",
    "pass",
]
BRIDGE_COLUMNS = ["check", "value", "reference", "error", "pass"]
COUPLING_COLUMNS = ["certificate", "beta", "nu", "lhs", "rhs", "margin", "error_bound", "pass"]
ASSUMPTION_COLUMNS = ["min_monotonicity_ratio", "max_lipschitz_ratio", "n_pairs", "alpha", "ell", "compliant"]


def kernel_table(gamma: float = 2.0, h_grid: Sequence[float] = DEFAULT_H_GRID) -> VerificationTable:
    grid = [float(h) for h in h_grid]
    rows: list[dict[str, Any]] = []
    for h in grid:
        x = gamma * h
        whitened = kernels.whitened_drift_gram(h, gamma)
        target = h / (2.0 * gamma)
        whitened_err = abs(whitened[0, 0] - target) / target
        semigroup = [kernels.semigroup_residual(h, other, gamma) for other in grid]
        primed = [kernels.semigroup_residual(h, other, gamma, primed=True) for other in grid]
        cov = max(kernels.covariance_semigroup_residual(h, other, gamma) for other in grid)
        conj_a, conj_c, conj_g = kernels.conjugation_residuals(h, gamma)

        reference_err = math.nan
        if x <= 1.0:
            reference = kernels.reference_covariance(h, gamma)
            reference_err = float(np.linalg.norm(kernels.build_kernel(h, gamma).c - reference)) / float(
                np.linalg.norm(reference)
            )
        small, top = kernels.gamma_prime_eigenvalues(h, gamma)
        remainder = math.nan
        if x < EXPANSION_LIMIT:
            remainder = kernels.gamma_prime_eigen_expansion_check(gamma, [h])
        alternative = kernels.primed_form_discrepancies(h, gamma)

        row = {
            "h": h,
            "gamma": gamma,
            "whitened_rel_err": whitened_err,
            "semigroup_a": max(r[0] for r in semigroup),
            "semigroup_g": max(r[1] for r in semigroup),
            "semigroup_cov": cov,
            "semigroup_primed": max(max(r) for r in primed),
            "conjugation_a": conj_a,
            "conjugation_c": conj_c,
            "conjugation_g": conj_g,
            "reference_rel_err": reference_err,
            "e2_gamma_over_h": top * gamma / h,
            "mean_eig_gamma_over_h": 0.5 * (small + top) * gamma / h,
            "expansion_remainder": remainder,
            "g_prime_alternative": alternative["g_prime"],
            "gamma_prime_sq_alternative": alternative["gamma_prime_sq"],
        }
        row["pass"] = bool(
            whitened_err <= WHITENED_TOLERANCE
            and max(row["semigroup_a"], row["semigroup_g"], row["semigroup_primed"]) <= IDENTITY_TOLERANCE
            and cov <= IDENTITY_TOLERANCE
            and max(conj_a, conj_c, conj_g) <= IDENTITY_TOLERANCE
            and (math.isnan(reference_err) or reference_err <= REFERENCE_TOLERANCE)
            and row["e2_gamma_over_h"] <= GAMMA_PRIME_CONSTANT_LIMIT
        )
        rows.append(row)
    passed = all(row["pass"] for row in rows)
    logger.info(f"[VERIFY] kernels gamma={gamma:.6g} points={len(rows)} passed={passed}")
    return VerificationTable(suite=VerifySuite.kernels.value, columns=KERNEL_COLUMNS, rows=rows, passed=passed)


def _max_z(samples: np.ndarray, expected: np.ndarray) -> float:
    """Largest standardized gap between empirical and expected covariance of zero-mean rows."""
    n = samples.shape[1]
    empirical = samples @ samples.T / n
    variances = np.diag(expected)
    se = np.sqrt((np.outer(variances, variances) + expected**2) / n)
    mask = se > 0
    if not np.any(mask):
        return float(np.abs(empirical).max(initial=0.0))
    return float(np.max(np.abs(empirical - expected)[mask] / se[mask]))


def _probe_indices(k: int) -> tuple[int, ...]:
    return tuple(sorted({0, min(1, k - 1), k // 2, k - 1}))


def bridge_table(
    k: int = 8,
    eta: float = 0.05,
    gamma: float = 2.0,
    *,
    n_mc: int = 100_000,
    seed: int = 0,
) -> VerificationTable:
    rng = RngStream(seed, 0)
    rows: list[dict[str, Any]] = []
    indices = _probe_indices(k)

    for convention in InterpolantConvention:
        plan = sample_overdamped_bridge(k, eta, n_mc, indices, rng, convention=convention)
        samples = np.vstack([plan.interpolant_noise, plan.end_noise[None, :]])
        points = [*interpolant_points(indices, convention), k]
        z = _max_z(samples, assemble_overdamped_covariance(k, eta, points))
        rows.append(
            {"check": f"overdamped_cov_{convention}", "value": z, "reference": 0.0, "error": z, "pass": z <= Z_LIMIT}
        )

    plan = sample_underdamped_bridge(k, eta, gamma, n_mc, indices, rng)
    samples = np.vstack([plan.interpolant_noise.reshape(-1, n_mc), plan.end_noise])
    z = _max_z(samples, assemble_underdamped_covariance(k, eta, gamma, [*indices, k]))
    rows.append({"check": "underdamped_cov", "value": z, "reference": 0.0, "error": z, "pass": z <= Z_LIMIT})

    worst = 0.0
    if k <= 8:
        for size in range(k + 1):
            for subset in itertools.combinations(range(k), size):
                points = [*subset, k]
                closed = assemble_underdamped_covariance(k, eta, gamma, points)
                brute = brute_force_underdamped_covariance(k, eta, gamma, points)
                scale = float(np.abs(brute).max()) or 1.0
                worst = max(worst, float(np.abs(closed - brute).max()) / scale)
        rows.append(
            {
                "check": "underdamped_cov_brute_force",
                "value": worst,
                "reference": 0.0,
                "error": worst,
                "pass": worst <= BRUTE_FORCE_TOLERANCE,
            }
        )

    n_batches = max(1000, n_mc // 10)
    sizes = np.array([len(sample_index_set(k, rng)) for _ in range(n_batches)], dtype=float)
    mean_size = float(sizes.mean())
    expected_sd = math.sqrt(1.0 - 1.0 / k)
    size_err = abs(mean_size - 1.0)
    size_ok = size_err <= Z_LIMIT * expected_sd / math.sqrt(n_batches) if k > 1 else mean_size == 1.0
    rows.append(
        {"check": "mean_index_set_size", "value": mean_size, "reference": 1.0, "error": size_err, "pass": size_ok}
    )

    report = max_partial_sum_diag(k, eta, 1, max(1000, n_mc // 10), rng)
    rows.append(
        {
            "check": "max_partial_sum",
            "value": report.value,
            "reference": report.doob_bound,
            "error": report.std_error,
            "pass": not report.violated,
        }
    )
    passed = all(row["pass"] for row in rows)
    logger.info(f"[VERIFY] bridge k={k} eta={eta:.6g} gamma={gamma:.6g} passed={passed}")
    return VerificationTable(suite=VerifySuite.bridge.value, columns=BRIDGE_COLUMNS, rows=rows, passed=passed)


def coupling_table(betas: Sequence[float] = DEFAULT_BETA_GRID, n_quad: int = DEFAULT_N_QUAD) -> VerificationTable:
    rows = [certificate.to_row() for certificate in coupling_grid(betas, n_quad)]
    passed = all(row["pass"] for row in rows)
    logger.info(f"[VERIFY] coupling grid={list(betas)} n_quad={n_quad} passed={passed}")
    return VerificationTable(suite=VerifySuite.coupling.value, columns=COUPLING_COLUMNS, rows=rows, passed=passed)


def assumption_table(
    target: TargetConfig, *, n_pairs: int = 1000, radius: float = 5.0, seed: int = 0
) -> VerificationTable:
    spec = build_target(target)
    report = probe_assumption(spec, n_pairs, radius, seed)
    row = report.to_dict()
    logger.info(f"[VERIFY] assumption {spec.name}: {row}")
    return VerificationTable(
        suite=VerifySuite.assumption.value, columns=ASSUMPTION_COLUMNS, rows=[row], passed=report.compliant
    )


class VerificationService:
    def run_verify(self, which: VerifySuite | str, **parameters: Any) -> RunReport:
        try:
            suite = VerifySuite(which)
        except ValueError as exc:
            raise UnknownSelectorError(str(which), [s.value for s in VerifySuite]) from exc

        if suite == VerifySuite.kernels:
            table = kernel_table(**parameters)
        elif suite == VerifySuite.bridge:
            table = bridge_table(**parameters)
        elif suite == VerifySuite.coupling:
            table = coupling_table(**parameters)
        else:
            table = assumption_table(**parameters)

        echo = {
            key: (value if isinstance(value, int | float | str | bool) or value is None else str(value))
            for key, value in parameters.items()
        }
        return RunReport(command=f"verify-{suite.value}", parameters=echo, verification=[table], passed=table.passed)


__all__ = [
    "ASSUMPTION_COLUMNS",
    "BRIDGE_COLUMNS",
    "COUPLING_COLUMNS",
    "DEFAULT_H_GRID",
    "KERNEL_COLUMNS",
    "VerificationService",
    "assumption_table",
    "bridge_table",
    "coupling_table",
    "kernel_table",
]
