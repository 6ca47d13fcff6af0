"""Pydantic contracts for configuration documents and reports."""

from .base import BaseContract, ErrorDetail, ErrorResponse
from .experiment import ExperimentConfig, SamplerConfig, ScheduleInputs, ScheduleSettings, TargetConfig
from .reports import CurveFit, RunReport, SweepRow, VerificationTable, W2Summary

__all__ = [
    "BaseContract",
    "CurveFit",
    "ErrorDetail",
    "ErrorResponse",
    "ExperimentConfig",
    "RunReport",
    "SamplerConfig",
    "ScheduleInputs",
    "ScheduleSettings",
    "SweepRow",
    "TargetConfig",
    "VerificationTable",
    "W2Summary",
]
