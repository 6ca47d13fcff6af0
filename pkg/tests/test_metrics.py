from __future__ import annotations

import numpy as np
import pytest

from plmc.core.rng import RngStream
from plmc.metrics.curves import error_curve, fit_exponent
from plmc.metrics.moments import MomentEstimate
from plmc.metrics.wasserstein import (
    W2Estimate,
    random_directions,
    w2_exact_1d,
    w2_gaussian,
    w2_sliced,
    w2_threshold,
)
from plmc.shared.enums import Estimator
from plmc.util.errors import EstimatorMismatchError, InvalidCovarianceError, InvalidCurveError


def test_w2_gaussian_known_values():
    assert w2_gaussian([0.0], [1.0], [1.0], [1.0]) == pytest.approx(1.0)
    assert w2_gaussian([0.0], [1.0], [0.0], [4.0]) == pytest.approx(1.0)
    assert w2_gaussian([0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [1.0, 1.0]) == 0.0


def test_w2_gaussian_full_matches_diagonal():
    diag = w2_gaussian([1.0, 2.0], [2.0, 0.5], [0.0, 0.0], [1.0, 3.0], mode="diagonal")
    full = w2_gaussian([1.0, 2.0], np.diag([2.0, 0.5]), [0.0, 0.0], np.diag([1.0, 3.0]), mode="full")
    assert full == pytest.approx(diag, rel=1e-10)


def test_w2_gaussian_symmetric_for_full_covariances():
    a = np.array([[2.0, 0.3], [0.3, 1.0]])
    b = np.array([[1.0, -0.2], [-0.2, 0.5]])
    forward = w2_gaussian([0.0, 1.0], a, [0.5, 0.0], b)
    backward = w2_gaussian([0.5, 0.0], b, [0.0, 1.0], a)
    assert forward == pytest.approx(backward, rel=1e-9)
    assert forward > 0


def test_w2_gaussian_rejects_bad_inputs():
    with pytest.raises(InvalidCovarianceError):
        w2_gaussian([0.0, 0.0], np.array([[1.0, 0.0], [0.0, -1.0]]), [0.0, 0.0], np.eye(2))
    with pytest.raises(InvalidCovarianceError):
        w2_gaussian([0.0, 0.0], np.array([[1.0, 0.5], [0.0, 1.0]]), [0.0, 0.0], np.eye(2))
    with pytest.raises(InvalidCovarianceError):
        w2_gaussian([0.0], [-1.0], [0.0], [1.0])
    with pytest.raises(EstimatorMismatchError):
        w2_gaussian([0.0], [1.0], [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(EstimatorMismatchError):
        w2_gaussian([0.0, 0.0], np.eye(2), [0.0, 0.0], np.eye(2), mode="diagonal")


def test_exact_1d_order_statistics():
    assert w2_exact_1d([3.0, 1.0, 2.0], [2.0, 3.0, 4.0]) == pytest.approx(1.0)
    with pytest.raises(EstimatorMismatchError):
        w2_exact_1d([1.0, 2.0], [1.0])
    with pytest.raises(EstimatorMismatchError):
        w2_exact_1d([], [])


def test_sliced_is_exact_for_a_shift():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((500, 3))
    b = a + np.array([1.0, 0.0, 0.0])
    directions = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    estimate = w2_sliced(a, b, 0, directions=directions)
    assert estimate.estimator == Estimator.sliced
    assert estimate.value_sq == pytest.approx(0.5)
    assert estimate.std_error == pytest.approx(0.5)


def test_sliced_never_exceeds_full_w2_for_shift():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((400, 4))
    b = a + 2.0
    estimate = w2_sliced(a, b, 64, RngStream(5, 0))
    assert 0.0 < estimate.value_sq <= 16.0 + 1e-9


def test_sliced_argument_errors():
    a = np.zeros((10, 2))
    with pytest.raises(EstimatorMismatchError):
        w2_sliced(a, np.zeros((9, 2)), 4, RngStream(0, 0))
    with pytest.raises(EstimatorMismatchError):
        w2_sliced(a, a, 0, RngStream(0, 0))
    with pytest.raises(EstimatorMismatchError):
        w2_sliced(a, a, 4, None)


def test_random_directions_are_unit_vectors():
    dirs = random_directions(20, 5, np.random.default_rng(2))
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0)


def test_threshold_and_estimate_value():
    assert w2_threshold(0.1, 4, 2.0) == pytest.approx(0.02)
    assert W2Estimate(value_sq=4.0, estimator=Estimator.moment).value == pytest.approx(2.0)


@pytest.mark.parametrize("diagonal", [False, True])
def test_moment_merge_matches_full_pass(diagonal):
    data = np.random.default_rng(3).standard_normal((101, 3)) * [1.0, 2.0, 0.5] + [1.0, -1.0, 0.0]
    full = MomentEstimate.from_samples(data, diagonal=diagonal)
    merged = MomentEstimate.empty(3, diagonal=diagonal)
    for chunk in np.array_split(data, 7):
        merged = merged.merge(MomentEstimate.from_samples(chunk, diagonal=diagonal))
    assert merged.n == 101
    np.testing.assert_allclose(merged.mean, full.mean, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(merged.cov, full.cov, rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(merged.cov_diag, np.var(data, axis=0, ddof=1), rtol=1e-10)


def test_moment_std_errors_and_small_samples():
    single = MomentEstimate.from_samples(np.ones((1, 2)))
    assert np.all(single.cov == 0)
    mean_se, _ = single.std_errors()
    assert np.all(np.isinf(mean_se))

    data = np.random.default_rng(4).standard_normal((400, 2))
    mean_se, cov_se = MomentEstimate.from_samples(data, diagonal=True).std_errors()
    assert mean_se == pytest.approx([0.05, 0.05], rel=0.15)
    assert cov_se.shape == (2,)


def test_moment_merge_rejects_mismatch():
    with pytest.raises(EstimatorMismatchError):
        MomentEstimate.empty(2).merge(MomentEstimate.empty(2, diagonal=True))
    with pytest.raises(EstimatorMismatchError):
        MomentEstimate.from_samples(np.zeros(3))


def test_fit_exponent_recovers_power_law():
    epsilons = [0.1, 0.05, 0.025]
    calls = [7.0 * eps ** (-2.0 / 3.0) for eps in epsilons]
    fit = fit_exponent(epsilons, calls)
    assert fit.slope == pytest.approx(2.0 / 3.0)
    assert fit.residual == pytest.approx(0.0, abs=1e-20)
    assert fit.n_points == 3


def test_error_curve_accepts_estimates():
    points = [(calls, W2Estimate(value_sq=1.0 / calls, estimator=Estimator.moment)) for calls in (10.0, 100.0, 1000.0)]
    assert error_curve(points).slope == pytest.approx(-1.0)


@pytest.mark.parametrize(
    ("epsilons", "calls"),
    [([0.1, 0.05], [1.0, 2.0]), ([0.1, 0.05, 0.0], [1.0, 2.0, 3.0]), ([0.1, 0.1, 0.05], [1.0, 2.0, 3.0])],
)
def test_fit_exponent_rejects_degenerate_curves(epsilons, calls):
    with pytest.raises(InvalidCurveError):
        fit_exponent(epsilons, calls)
