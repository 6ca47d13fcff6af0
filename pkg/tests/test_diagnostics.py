from __future__ import annotations

import numpy as np
import pytest

from plmc.contracts.experiment import SamplerConfig
from plmc.core.potential import PotentialSpec, make_quadratic
from plmc.core.rng import RngStream
from plmc.samplers.chain import displaced_start, init_chain
from plmc.samplers.diagnostics import (
    GRADIENT_SUM_CONSTANT,
    drift_map_contraction,
    gradient_sum_diagnostic,
    run_chain,
    transformed_contraction,
)
from plmc.shared.enums import Dynamics, Method
from plmc.util.errors import DiagnosticUnavailableError, InvalidTargetError


def test_trace_holds_initial_and_final_states(isotropic_spec):
    config = SamplerConfig(eta=0.1, k=4, n_batches=10)
    state = init_chain(isotropic_spec, Dynamics.overdamped, RngStream(3, 0))
    run = run_chain(isotropic_spec, config, state, checkpoint_every=3)
    assert [s.batch_index for s in run.trace] == [0, 3, 6, 9, 10]
    assert run.trace[0] is state
    assert run.trace[-1] is run.final


def test_no_trace_without_checkpoints(isotropic_spec):
    config = SamplerConfig(eta=0.1, k=4, n_batches=5)
    run = run_chain(isotropic_spec, config, init_chain(isotropic_spec, Dynamics.overdamped, RngStream(3, 0)))
    assert run.trace == []
    assert run.final.batch_index == 5


def test_zero_batches_returns_initial_state(isotropic_spec):
    state = init_chain(isotropic_spec, Dynamics.overdamped, RngStream(3, 0))
    run = run_chain(isotropic_spec, SamplerConfig(eta=0.1, n_batches=0), state, checkpoint_every=1)
    assert run.final is state
    assert run.final.gradient_calls == 0


def test_state_must_match_dynamics(isotropic_spec):
    state = init_chain(isotropic_spec, Dynamics.overdamped, RngStream(3, 0))
    config = SamplerConfig(eta=0.1, gamma=2.0, n_batches=2, dynamics=Dynamics.underdamped)
    with pytest.raises(InvalidTargetError):
        run_chain(isotropic_spec, config, state)


def test_gradient_sum_bound_holds_for_euler(anisotropic_spec):
    eta = 0.02
    config = SamplerConfig(eta=eta, n_batches=200, method=Method.euler)
    traces = []
    for chain in range(20):
        state = init_chain(anisotropic_spec, Dynamics.overdamped, RngStream(11, chain))
        traces.append(run_chain(anisotropic_spec, config, state, checkpoint_every=1).trace)

    report = gradient_sum_diagnostic(traces, anisotropic_spec, eta)
    assert not report.violated
    assert report.noise_term == pytest.approx(anisotropic_spec.ell * anisotropic_spec.dim * 200)
    assert report.bound == pytest.approx(GRADIENT_SUM_CONSTANT * (report.value_term + report.noise_term))
    # stationary mean of the squared gradient norm is the precision trace
    assert report.sum_sq_grad / 200 == pytest.approx(5.0, rel=0.3)
    assert report.to_dict()["violated"] is False


@pytest.mark.benchmark
@pytest.mark.parametrize("dim", [2, 8])
def test_gradient_sum_bound_holds_for_poisson_batches(dim):
    precision = np.linspace(1.0, 4.0, dim)
    spec = make_quadratic(precision, np.zeros(dim))
    eta, n_batches, n_chains = 0.01, 200, 1000
    config = SamplerConfig(eta=eta, k=8, n_batches=n_batches, method=Method.poisson)
    traces = []
    for chain in range(n_chains):
        state = displaced_start(spec, Dynamics.overdamped, RngStream(21, chain), 0.0)
        traces.append(run_chain(spec, config, state, checkpoint_every=1).trace)

    report = gradient_sum_diagnostic(traces, spec, eta)
    assert not report.violated
    assert report.sum_sq_grad <= report.bound
    assert report.noise_term == pytest.approx(4.0 * dim * n_batches)
    assert report.sum_sq_grad / n_batches == pytest.approx(precision.sum(), rel=0.1)


def test_gradient_sum_needs_value_and_traces(anisotropic_spec):
    no_value = PotentialSpec(alpha=1.0, ell=1.0, dim=1, gradient=lambda x: x)
    state = init_chain(no_value, Dynamics.overdamped, RngStream(0, 0))
    with pytest.raises(DiagnosticUnavailableError):
        gradient_sum_diagnostic([[state]], no_value, 0.1)
    with pytest.raises(DiagnosticUnavailableError):
        gradient_sum_diagnostic([], anisotropic_spec, 0.1)

    first = init_chain(anisotropic_spec, Dynamics.overdamped, RngStream(0, 0))
    with pytest.raises(DiagnosticUnavailableError):
        gradient_sum_diagnostic([[first], [first, first]], anisotropic_spec, 0.1)


def test_drift_map_contracts(anisotropic_spec):
    step = 0.1
    report = drift_map_contraction(anisotropic_spec, step, 500, np.random.default_rng(0))
    assert report.bound == pytest.approx(1.0 - anisotropic_spec.alpha * step)
    assert report.max_ratio <= report.bound + 1e-12
    assert report.max_ratio > 0.6


def test_transformed_contraction_rate():
    report = transformed_contraction([1.0, 4.0], 1e-3, 4.0)
    assert report.max_ratio < 1.0
    assert report.rate_constant is not None
    assert 0.9 <= report.rate_constant <= 1.1


@pytest.mark.parametrize("precisions", [[], [1.0, 0.0], [-2.0]])
def test_transformed_contraction_rejects_bad_precisions(precisions):
    with pytest.raises(InvalidTargetError):
        transformed_contraction(precisions, 1e-3, 4.0)
