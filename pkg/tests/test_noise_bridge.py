from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from plmc.core.kernel import build_kernel
from plmc.core.noise_bridge import (
    PartialSumReport,
    assemble_overdamped_covariance,
    assemble_underdamped_covariance,
    bridge_points,
    brute_force_underdamped_covariance,
    interpolant_points,
    max_partial_sum_diag,
    sample_index_set,
    sample_overdamped_bridge,
    sample_underdamped_bridge,
)
from plmc.core.rng import RngStream
from plmc.shared.enums import InterpolantConvention
from plmc.util.errors import InvalidBatchError

N_MC = 60_000


def _assert_covariance(samples: np.ndarray, expected: np.ndarray, n_se: float = 5.0) -> None:
    n = samples.shape[1]
    empirical = samples @ samples.T / n
    variances = np.diag(expected)
    se = np.sqrt((np.outer(variances, variances) + expected**2) / n)
    assert np.all(np.abs(empirical - expected) <= n_se * se + 1e-300)


def test_index_set_has_unit_mean_size():
    rng = RngStream(21, 0)
    k = 6
    draws = [sample_index_set(k, rng) for _ in range(20_000)]
    sizes = np.array([len(s) for s in draws], dtype=float)
    expected_se = math.sqrt(1.0 - 1.0 / k) / math.sqrt(sizes.size)
    assert abs(sizes.mean() - 1.0) <= 5 * expected_se
    counts = np.zeros(k)
    for s in draws:
        assert list(s) == sorted(set(s))
        assert all(0 <= i < k for i in s)
        counts[list(s)] += 1
    frequencies = counts / len(draws)
    np.testing.assert_allclose(frequencies, 1.0 / k, atol=5 * math.sqrt((1 / k) * (1 - 1 / k) / len(draws)))


def test_single_step_batches_always_select_zero():
    rng = RngStream(2, 0)
    assert all(sample_index_set(1, rng) == (0,) for _ in range(100))


def test_index_set_rejects_empty_batches():
    with pytest.raises(InvalidBatchError):
        sample_index_set(0, RngStream(0, 0))


def test_points_per_convention():
    assert interpolant_points((0, 2), InterpolantConvention.exclusive) == (0, 2)
    assert interpolant_points((0, 2), InterpolantConvention.inclusive) == (1, 3)
    assert bridge_points(4, (1, 3), InterpolantConvention.inclusive) == (2, 4)
    assert bridge_points(4, (), InterpolantConvention.exclusive) == (4,)


@pytest.mark.parametrize("indices", [(2, 1), (0, 4), (-1,)])
def test_bridge_rejects_bad_indices(indices):
    with pytest.raises(InvalidBatchError):
        sample_overdamped_bridge(4, 0.1, 2, indices, RngStream(0, 0))


@pytest.mark.parametrize("convention", list(InterpolantConvention))
def test_overdamped_bridge_covariance(convention):
    k, eta, indices = 5, 0.2, (0, 1, 3, 4)
    plan = sample_overdamped_bridge(k, eta, N_MC, indices, RngStream(3, 0), convention=convention)
    assert plan.size == 4
    assert plan.interpolant_noise.shape == (4, N_MC)
    samples = np.vstack([plan.interpolant_noise, plan.end_noise[None, :]])
    points = [*interpolant_points(indices, convention), k]
    _assert_covariance(samples, assemble_overdamped_covariance(k, eta, points))


def test_overdamped_end_noise_variance_is_two_eta():
    plan = sample_overdamped_bridge(7, 0.3, N_MC, (), RngStream(4, 0))
    assert plan.interpolant_noise.shape == (0, N_MC)
    assert plan.end_noise.var() == pytest.approx(0.6, rel=0.03)


def test_underdamped_bridge_covariance():
    k, eta, gamma, indices = 6, 0.3, 2.0, (0, 2, 5)
    plan = sample_underdamped_bridge(k, eta, gamma, N_MC, indices, RngStream(5, 0))
    assert plan.interpolant_noise.shape == (3, 2, N_MC)
    np.testing.assert_array_equal(plan.interpolant_noise[0], np.zeros((2, N_MC)))
    samples = np.vstack([plan.interpolant_noise.reshape(-1, N_MC), plan.end_noise])
    _assert_covariance(samples, assemble_underdamped_covariance(k, eta, gamma, [*indices, k]))


def test_underdamped_end_covariance_is_full_step_covariance():
    k, eta, gamma = 5, 0.4, 1.5
    expected = build_kernel(eta, gamma).c
    closed = assemble_underdamped_covariance(k, eta, gamma, [k])
    np.testing.assert_allclose(closed, expected, rtol=1e-12)


def test_closed_form_covariance_matches_brute_force():
    k, eta, gamma = 5, 0.25, 3.0
    for size in range(k + 1):
        for subset in itertools.combinations(range(k), size):
            points = [*subset, k]
            closed = assemble_underdamped_covariance(k, eta, gamma, points)
            brute = brute_force_underdamped_covariance(k, eta, gamma, points)
            scale = float(np.abs(brute).max())
            assert float(np.abs(closed - brute).max()) <= 1e-10 * scale


def test_max_partial_sum_lies_between_final_moment_and_doob_bound():
    k, eta, dim = 8, 0.1, 2
    report = max_partial_sum_diag(k, eta, dim, 20_000, RngStream(6, 0))
    assert report.value >= 2 * eta * dim - 5 * report.std_error
    assert report.value <= report.doob_bound
    assert report.exceeds_bound
    assert not report.violated
    row = report.to_dict()
    assert row["n_mc"] == 20_000
    assert row["exceeds_bound"] is True and row["violated"] is False


def test_max_partial_sum_violation_is_judged_against_doob_bound():
    report = PartialSumReport(value=10.0, std_error=0.1, bound=0.2, doob_bound=1.6, n_mc=1000)
    assert report.exceeds_bound and report.violated
    quiet = PartialSumReport(value=1.0, std_error=0.1, bound=0.2, doob_bound=1.6, n_mc=1000)
    assert quiet.exceeds_bound and not quiet.violated


def test_max_partial_sum_needs_enough_paths():
    with pytest.raises(InvalidBatchError):
        max_partial_sum_diag(4, 0.1, 1, 999, RngStream(0, 0))
