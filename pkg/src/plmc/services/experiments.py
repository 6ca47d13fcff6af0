"""Multi-chain sampling runs and accuracy sweeps."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from functools import reduce

import numpy as np

from ..contracts.experiment import ExperimentConfig, SamplerConfig, ScheduleInputs
from ..contracts.reports import CurveFit as CurveFitRow
from ..contracts.reports import RunReport, SweepRow, W2Summary
from ..core.potential import PotentialSpec
from ..core.rng import RngStream
from ..jobs.chains import ChainPool
from ..metrics.curves import error_curve, fit_exponent
from ..metrics.moments import MomentEstimate
from ..metrics.wasserstein import W2Estimate, w2_exact_1d, w2_gaussian, w2_sliced, w2_threshold
from ..samplers.chain import displaced_start, init_chain
from ..samplers.diagnostics import ChainRun, run_chain
from ..samplers.schedules import ScheduleResult, schedule_for
from ..shared.enums import Estimator, Method
from ..util.errors import ConfigError, EstimatorMismatchError, InvalidCurveError
from .targets import build_target, reference_samples

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ("estimator", "value_sq", "std_error", "threshold", "total_gradient_calls")
SWEEP_COLUMNS = (
    "epsilon",
    "eta",
    "k",
    "n_batches",
    "gradient_calls",
    "scheduled_calls",
    "total_gradient_calls",
    "mean_index_set_size",
    "w2_moment",
    "w2_sliced",
    "stderr",
    "threshold",
    "attained",
)
_DIRECTION_STREAM = 0xD1EC
MIN_SWEEP_POINTS = 3
MIN_SWEEP_CHECKPOINTS = 50
SWEEP_START_RATIO = 10.0


@dataclass(slots=True)
class _Batch:
    spec: PotentialSpec
    sampler: SamplerConfig
    runs: list[ChainRun]

    @property
    def finals(self) -> np.ndarray:
        return np.stack([run.final.position for run in self.runs])

    @property
    def total_gradient_calls(self) -> int:
        return sum(run.final.gradient_calls for run in self.runs)

    @property
    def mean_index_set_size(self) -> float:
        batches = self.sampler.n_batches * len(self.runs)
        if self.sampler.method == Method.euler or batches == 0:
            return 0.0
        return sum(run.index_set_total for run in self.runs) / batches


def chain_moments(positions: np.ndarray) -> MomentEstimate:
    """Per-chain estimates merged in chain order."""
    dim = positions.shape[1]
    per_chain = (MomentEstimate.from_samples(row[None, :], diagonal=True) for row in positions)
    return reduce(MomentEstimate.merge, per_chain, MomentEstimate.empty(dim, diagonal=True))


def moment_w2(spec: PotentialSpec, positions: np.ndarray) -> float:
    if spec.gaussian is None:
        raise EstimatorMismatchError(f"moment W2 needs a Gaussian target, got {spec.name}")
    moments = chain_moments(positions)
    return w2_gaussian(
        moments.mean, moments.cov_diag, spec.gaussian.mean, spec.gaussian.stationary_cov_diag, mode="diagonal"
    )


def checkpoint_w2(spec: PotentialSpec, positions: np.ndarray) -> float:
    """Moment W2 from a single pooled estimate, for scanning checkpoints."""
    assert spec.gaussian is not None
    moments = MomentEstimate.from_samples(positions, diagonal=True)
    return w2_gaussian(
        moments.mean, moments.cov_diag, spec.gaussian.mean, spec.gaussian.stationary_cov_diag, mode="diagonal"
    )


class ExperimentService:
    def __init__(self, pool: ChainPool, *, record_timing: bool = False) -> None:
        self._pool = pool
        self._record_timing = record_timing

    def _timing(self, config: ExperimentConfig) -> bool:
        return self._record_timing or config.record_timing

    def _schedule(self, config: ExperimentConfig, spec: PotentialSpec, epsilon: float) -> ScheduleResult:
        assert config.schedule is not None
        settings = config.schedule.model_dump(exclude={"epsilon"})
        inputs = ScheduleInputs(epsilon=epsilon, alpha=spec.alpha, ell=spec.ell, dim=spec.dim, **settings)
        return schedule_for(inputs, config.dynamics, config.method)

    def _run_chains(
        self,
        config: ExperimentConfig,
        spec: PotentialSpec,
        sampler: SamplerConfig,
        checkpoint_every: int | None,
        start_distance: float | None = None,
    ) -> _Batch:
        def one_chain(chain_id: int) -> ChainRun:
            rng = RngStream(config.seed, chain_id)
            if start_distance is None:
                state = init_chain(spec, sampler.dynamics, rng)
            else:
                state = displaced_start(spec, sampler.dynamics, rng, start_distance)
            return run_chain(
                spec,
                sampler,
                state,
                convention=config.convention,
                mode=config.batch_mode,
                checkpoint_every=checkpoint_every,
            )

        runs = self._pool.map_chains(one_chain, config.n_chains, label=f"{sampler.dynamics}/{sampler.method}")
        return _Batch(spec=spec, sampler=sampler, runs=runs)

    def _estimates(self, config: ExperimentConfig, spec: PotentialSpec, positions: np.ndarray) -> list[W2Estimate]:
        estimates = []
        reference = None
        for estimator in config.estimators:
            if estimator == Estimator.moment:
                estimates.append(W2Estimate(value_sq=moment_w2(spec, positions), estimator=estimator))
                continue
            if reference is None:
                reference = reference_samples(spec, positions.shape[0], config.seed)
            if estimator == Estimator.sliced:
                directions_rng = RngStream(config.seed, _DIRECTION_STREAM)
                estimates.append(w2_sliced(positions, reference, config.n_directions, directions_rng))
            else:
                if spec.dim != 1:
                    raise EstimatorMismatchError("exact_1d needs a one-dimensional target", details={"dim": spec.dim})
                estimates.append(
                    W2Estimate(value_sq=w2_exact_1d(positions[:, 0], reference[:, 0]), estimator=Estimator.exact_1d)
                )
        return estimates

    def run_sample(self, config: ExperimentConfig) -> RunReport:
        started = time.perf_counter()
        spec = build_target(config.target)
        epsilon = None
        if config.sampler is not None:
            sampler = config.sampler
        else:
            assert config.schedule is not None
            if config.schedule.epsilon is None:
                raise ConfigError("a schedule needs an epsilon for sample runs")
            epsilon = config.schedule.epsilon
            sampler = self._schedule(config, spec, epsilon).config

        logger.info(
            f"[SAMPLE] {config.dynamics}/{config.method} eta={sampler.eta:.6g} k={sampler.k} "
            f"n_batches={sampler.n_batches} chains={config.n_chains}"
        )
        batch = self._run_chains(config, spec, sampler, None)
        positions = batch.finals
        threshold = w2_threshold(epsilon, spec.dim, spec.alpha) if epsilon is not None else None
        summaries = [
            W2Summary(
                estimator=str(est.estimator), value_sq=est.value_sq, std_error=est.std_error, threshold=threshold
            )
            for est in self._estimates(config, spec, positions)
        ]
        moments = chain_moments(positions)
        report = RunReport(
            command="sample",
            config=config,
            n_chains=config.n_chains,
            total_gradient_calls=batch.total_gradient_calls,
            mean_index_set_size=batch.mean_index_set_size,
            w2=summaries,
            moments={"mean": moments.mean.tolist(), "cov_diag": moments.cov_diag.tolist()},
            parameters={"eta": sampler.eta, "k": sampler.k, "n_batches": sampler.n_batches, "gamma": sampler.gamma},
            passed=all(s.threshold is None or s.value_sq <= s.threshold for s in summaries),
        )
        if self._timing(config):
            report.wall_time = time.perf_counter() - started
        logger.info(f"[SAMPLE] done: gradient calls={report.total_gradient_calls}")
        return report

    def run_sweep(self, config: ExperimentConfig) -> RunReport:
        if config.schedule is None:
            raise ConfigError("sweeps need a schedule, not an explicit sampler")
        epsilons = config.epsilons or []
        if len(epsilons) < MIN_SWEEP_POINTS:
            raise ConfigError(f"sweeps need at least {MIN_SWEEP_POINTS} epsilons", details={"got": len(epsilons)})
        if any(not eps > 0 for eps in epsilons):
            raise ConfigError("epsilons must be positive")
        started = time.perf_counter()
        spec = build_target(config.target)
        if spec.gaussian is None:
            raise EstimatorMismatchError("sweeps measure moment W2 and need a Gaussian target")

        rows = [self._sweep_point(config, spec, eps) for eps in epsilons]
        report = RunReport(
            command="sweep",
            config=config,
            n_chains=config.n_chains,
            total_gradient_calls=sum(row.total_gradient_calls for row in rows),
            rows=rows,
            fits=self._fits(rows),
            passed=all(row.attained for row in rows),
        )
        if self._timing(config):
            report.wall_time = time.perf_counter() - started
        missed = [row.epsilon for row in rows if not row.attained]
        if missed:
            logger.warning(f"[SWEEP] threshold not attained within budget for epsilon in {missed}")
        return report

    def _sweep_point(self, config: ExperimentConfig, spec: PotentialSpec, epsilon: float) -> SweepRow:
        started = time.perf_counter()
        schedule = self._schedule(config, spec, epsilon)
        sampler = schedule.config
        threshold = w2_threshold(epsilon, spec.dim, spec.alpha)
        start_distance = math.sqrt((config.start_ratio or SWEEP_START_RATIO) * threshold)
        cadence = max(1, sampler.n_batches // max(config.checkpoints, MIN_SWEEP_CHECKPOINTS))
        batch = self._run_chains(config, spec, sampler, cadence, start_distance)

        first_passage = None
        for j in range(1, len(batch.runs[0].trace)):
            positions = np.stack([run.trace[j].position for run in batch.runs])
            if checkpoint_w2(spec, positions) <= threshold:
                first_passage = float(np.mean([run.trace[j].gradient_calls for run in batch.runs]))
                break

        positions = batch.finals
        estimates = {est.estimator: est for est in self._estimates(config, spec, positions)}
        moment = estimates.get(Estimator.moment)
        w2_moment = moment.value_sq if moment else moment_w2(spec, positions)
        sliced = estimates.get(Estimator.sliced)
        calls_per_batch = 1.0 if sampler.method == Method.euler else 2.0
        row = SweepRow(
            epsilon=epsilon,
            eta=sampler.eta,
            k=sampler.k,
            n_batches=sampler.n_batches,
            gradient_calls=first_passage,
            scheduled_calls=sampler.n_batches * calls_per_batch,
            total_gradient_calls=batch.total_gradient_calls,
            mean_index_set_size=batch.mean_index_set_size,
            w2_moment=w2_moment,
            w2_sliced=sliced.value_sq if sliced else None,
            stderr=sliced.std_error if sliced else None,
            threshold=threshold,
            attained=first_passage is not None,
        )
        if self._timing(config):
            row.wall_time = time.perf_counter() - started
        logger.info(
            f"[SWEEP] eps={epsilon:.6g} eta={sampler.eta:.6g} k={sampler.k} n={sampler.n_batches} "
            f"w2={w2_moment:.6g} threshold={threshold:.6g} attained={row.attained}"
        )
        return row

    def _fits(self, rows: list[SweepRow]) -> list[CurveFitRow]:
        fits = []
        try:
            scheduled = fit_exponent([r.epsilon for r in rows], [r.scheduled_calls for r in rows])
            fits.append(CurveFitRow.model_validate(scheduled).model_copy(update={"kind": "scheduled"}))
        except InvalidCurveError as exc:
            logger.warning(f"[SWEEP] no scheduled-budget fit: {exc}")

        attained = [r for r in rows if r.attained and r.gradient_calls]
        try:
            passage = fit_exponent([r.epsilon for r in attained], [r.gradient_calls or 0.0 for r in attained])
            fits.append(CurveFitRow.model_validate(passage).model_copy(update={"kind": "first_passage"}))
        except InvalidCurveError as exc:
            logger.warning(f"[SWEEP] no first-passage fit: {exc}")

        try:
            curve = error_curve([(r.scheduled_calls, r.w2_moment or 0.0) for r in rows])
            fits.append(CurveFitRow.model_validate(curve).model_copy(update={"kind": "error_curve"}))
        except InvalidCurveError as exc:
            logger.info(f"[SWEEP] no error curve: {exc}")
        return fits


def sample_rows(report: RunReport) -> list[dict]:
    return [
        {
            "estimator": s.estimator,
            "value_sq": s.value_sq,
            "std_error": s.std_error,
            "threshold": s.threshold,
            "total_gradient_calls": report.total_gradient_calls,
        }
        for s in report.w2
    ]


def sweep_rows(report: RunReport) -> list[dict]:
    return [row.model_dump() for row in report.rows]


__all__ = [
    "SAMPLE_COLUMNS",
    "SWEEP_COLUMNS",
    "ExperimentService",
    "chain_moments",
    "checkpoint_w2",
    "moment_w2",
    "sample_rows",
    "sweep_rows",
]
