from __future__ import annotations

import numpy as np
import pytest

from plmc.core.potential import (
    dump_logistic_csv,
    gram_opnorm,
    load_logistic_csv,
    make_logistic,
    make_quadratic,
    probe_assumption,
    synthesize_logistic_data,
)
from plmc.util.errors import InvalidTargetError


def test_quadratic_constants_and_gradient(anisotropic_spec):
    assert anisotropic_spec.alpha == 1.0
    assert anisotropic_spec.ell == 4.0
    assert anisotropic_spec.kappa == 4.0
    assert anisotropic_spec.dim == 2
    np.testing.assert_allclose(anisotropic_spec.gradient(np.array([2.0, 0.5])), [1.0, 4.0])
    np.testing.assert_allclose(anisotropic_spec.optimum, [1.0, -0.5])
    assert anisotropic_spec.value(np.array([1.0, -0.5])) == 0.0


def test_quadratic_gaussian_moments(anisotropic_spec):
    target = anisotropic_spec.gaussian
    assert target is not None
    np.testing.assert_allclose(target.stationary_cov_diag, [1.0, 0.25])
    draws = target.sample(200_000, np.random.default_rng(3))
    np.testing.assert_allclose(draws.mean(axis=0), [1.0, -0.5], atol=0.01)
    np.testing.assert_allclose(draws.var(axis=0), [1.0, 0.25], rtol=0.02)


@pytest.mark.parametrize(
    ("precision", "mean"),
    [([], []), ([1.0, 2.0], [0.0]), ([1.0, 0.0], [0.0, 0.0]), ([1.0, -2.0], [0.0, 0.0])],
)
def test_quadratic_rejects_bad_inputs(precision, mean):
    with pytest.raises(InvalidTargetError):
        make_quadratic(precision, mean)


def test_gram_opnorm_matches_eigenvalue():
    features = np.random.default_rng(0).standard_normal((50, 4))
    expected = float(np.linalg.eigvalsh(features.T @ features).max())
    assert gram_opnorm(features) == pytest.approx(expected, rel=1e-9)
    assert gram_opnorm(np.zeros((3, 2))) == 0.0


def test_logistic_gradient_matches_finite_differences():
    features, labels = synthesize_logistic_data(40, 3, seed=5)
    spec = make_logistic(0.5, features, labels)
    x = np.array([0.3, -0.2, 0.1])
    step = 1e-6
    numeric = np.array(
        [(spec.value(x + step * e) - spec.value(x - step * e)) / (2 * step) for e in np.eye(3)]
    )
    np.testing.assert_allclose(spec.gradient(x), numeric, atol=1e-6)
    assert spec.alpha == 0.5
    assert spec.ell == pytest.approx(0.5 + gram_opnorm(features) / 4.0)
    assert spec.optimum is None
    assert spec.gaussian is None


def test_logistic_rejects_bad_labels():
    with pytest.raises(InvalidTargetError):
        make_logistic(1.0, np.ones((2, 2)), [0.0, 1.0])
    with pytest.raises(InvalidTargetError):
        make_logistic(0.0, np.ones((2, 2)), [1.0, -1.0])


def test_logistic_csv_round_trip(tmp_path):
    features, labels = synthesize_logistic_data(10, 2, seed=1)
    path = tmp_path / "data" / "logistic.csv"
    dump_logistic_csv(path, features, labels)
    assert path.read_text().splitlines()[0] == "label,x0,x1"
    loaded_features, loaded_labels = load_logistic_csv(path)
    np.testing.assert_array_equal(loaded_features, features)
    np.testing.assert_array_equal(loaded_labels, labels)


def test_load_logistic_csv_missing_file(tmp_path):
    with pytest.raises(InvalidTargetError):
        load_logistic_csv(tmp_path / "absent.csv")


def test_probe_on_quadratic_is_within_constants(anisotropic_spec):
    report = probe_assumption(anisotropic_spec, 500, 5.0, seed=0)
    assert report.compliant
    assert 1.0 - 1e-9 <= report.min_monotonicity_ratio <= 4.0
    assert 1.0 <= report.max_lipschitz_ratio <= 4.0 + 1e-9
    assert report.to_dict()["n_pairs"] == 500


def test_probe_on_logistic_is_compliant():
    features, labels = synthesize_logistic_data(100, 4, seed=2)
    spec = make_logistic(1.0, features, labels)
    report = probe_assumption(spec, 300, 3.0, seed=1)
    assert report.compliant


def test_probe_rejects_bad_arguments(isotropic_spec):
    with pytest.raises(InvalidTargetError):
        probe_assumption(isotropic_spec, 0, 1.0, seed=0)
    with pytest.raises(InvalidTargetError):
        probe_assumption(isotropic_spec, 10, 0.0, seed=0)
