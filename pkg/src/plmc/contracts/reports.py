"""Report contracts written after runs, sweeps and verification suites."""

from __future__ import annotations

from typing import Literal

from pydantic import Field

from .base import BaseContract
from .experiment import ExperimentConfig

CellValue = float | int | bool | str | None


class W2Summary(BaseContract):
    estimator: str
    value_sq: float = Field(ge=0)
    std_error: float | None = None
    threshold: float | None = None


class SweepRow(BaseContract):
    """One accuracy target of a sweep."""

    epsilon: float
    eta: float
    k: int
    n_batches: int
    gradient_calls: float | None = Field(
        default=None, description="Mean calls per chain at the first checkpoint meeting the threshold"
    )
    scheduled_calls: float
    total_gradient_calls: int
    mean_index_set_size: float
    w2_moment: float | None = None
    w2_sliced: float | None = None
    stderr: float | None = None
    threshold: float
    attained: bool
    wall_time: float | None = None


class CurveFit(BaseContract):
    slope: float
    intercept: float
    residual: float
    n_points: int
    kind: Literal["first_passage", "scheduled", "error_curve"] = "scheduled"


class VerificationTable(BaseContract):
    suite: str
    columns: list[str]
    rows: list[dict[str, CellValue]] = Field(default_factory=list)
    passed: bool = True


class RunReport(BaseContract):
    """Full provenance of a command: the effective config echo plus every result table."""

    command: str
    config: ExperimentConfig | None = None
    parameters: dict[str, CellValue] = Field(default_factory=dict)
    n_chains: int = 0
    total_gradient_calls: int = 0
    mean_index_set_size: float | None = None
    w2: list[W2Summary] = Field(default_factory=list)
    moments: dict[str, list[float]] = Field(default_factory=dict)
    rows: list[SweepRow] = Field(default_factory=list)
    fits: list[CurveFit] = Field(default_factory=list)
    verification: list[VerificationTable] = Field(default_factory=list)
    wall_time: float | None = None
    passed: bool = True


__all__ = ["CellValue", "CurveFit", "RunReport", "SweepRow", "VerificationTable", "W2Summary"]
