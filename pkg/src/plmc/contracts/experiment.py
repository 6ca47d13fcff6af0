"""Experiment configuration contracts."""

from __future__ import annotations

from typing import Literal

from pydantic import Field, model_validator

from ..shared.enums import BatchMode, Dynamics, Estimator, InterpolantConvention, Method
from .base import BaseContract

MAX_SEED = 2**64


class TargetConfig(BaseContract):
    """Which potential to sample: a diagonal quadratic or a ridge-logistic posterior."""

    name: Literal["quadratic", "logistic"] = "quadratic"
    precision: list[float] | None = None
    mean: list[float] | None = None
    alpha: float = Field(default=1.0, gt=0)
    n_samples: int = Field(default=200, ge=1)
    dim: int = Field(default=2, ge=1)
    data_seed: int = Field(default=0, ge=0)
    data_path: str | None = None


class ScheduleSettings(BaseContract):
    """Accuracy target and schedule constants; the target supplies alpha, ell and dim."""

    epsilon: float | None = None
    p: int = Field(default=3, ge=0)
    c1: float = Field(default=1.0, gt=0)
    c2: float = Field(default=1.0, gt=0)
    c3: float = Field(default=1.0, gt=0)
    c4: float = Field(default=1.0, gt=0)
    gamma_c: float = Field(default=2.0, gt=0)


class ScheduleInputs(ScheduleSettings):
    epsilon: float
    alpha: float
    ell: float
    dim: int


class SamplerConfig(BaseContract):
    """Explicit step size, batch size, friction and number of batches.

    The Euler method ignores ``k`` and steps with ``eta`` directly.
    """

    eta: float = Field(gt=0)
    k: int = Field(default=1, ge=1)
    gamma: float | None = Field(default=None, gt=0)
    n_batches: int = Field(ge=0)
    dynamics: Dynamics = Dynamics.overdamped
    method: Method = Method.poisson

    @model_validator(mode="after")
    def _friction_for_underdamped(self) -> SamplerConfig:
        if self.dynamics == Dynamics.underdamped and self.gamma is None:
            raise ValueError("underdamped sampling needs a friction gamma")
        return self

    @property
    def inner_step(self) -> float:
        return self.eta if self.method == Method.euler else self.eta / self.k


class ExperimentConfig(BaseContract):
    """One sampling run or accuracy sweep.

    ``start_ratio`` only affects sweeps: their chains start from an exact stationary draw whose
    mean is moved so the initial squared W2 is that multiple of the threshold.
    """

    target: TargetConfig = Field(default_factory=TargetConfig)
    dynamics: Dynamics = Dynamics.overdamped
    method: Method = Method.poisson
    schedule: ScheduleSettings | None = None
    sampler: SamplerConfig | None = None
    n_chains: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0, lt=MAX_SEED)
    output_path: str | None = None
    estimators: list[Estimator] = Field(default_factory=lambda: [Estimator.moment])
    epsilons: list[float] | None = None
    n_directions: int = Field(default=50, ge=1)
    checkpoints: int = Field(default=200, ge=1)
    start_ratio: float | None = Field(default=None, gt=1)
    convention: InterpolantConvention = InterpolantConvention.exclusive
    batch_mode: BatchMode = BatchMode.skip_ahead
    record_timing: bool = False

    @model_validator(mode="after")
    def _exactly_one_schedule(self) -> ExperimentConfig:
        if (self.schedule is None) == (self.sampler is None):
            raise ValueError("exactly one of schedule or sampler must be given")
        if self.sampler is not None and (
            self.sampler.dynamics != self.dynamics or self.sampler.method != self.method
        ):
            raise ValueError("sampler dynamics and method must match the experiment")
        return self


__all__ = [
    "MAX_SEED",
    "ExperimentConfig",
    "SamplerConfig",
    "ScheduleInputs",
    "ScheduleSettings",
    "TargetConfig",
]
