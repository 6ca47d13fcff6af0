"""Error definitions shared by the library and the command line."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_VERIFICATION_FAILED = 3
EXIT_NOT_ATTAINED = 4


@dataclass(slots=True)
class PLMCError(Exception):
    """Domain-specific error carrying a stable code and a process exit status."""

    code: str
    message: str
    exit_status: int = EXIT_ERROR
    details: dict[str, Any] | None = None

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "error": {
                "code": self.code,
                "message": self.message,
            }
        }
        if self.details:
            payload["error"]["details"] = self.details
        return payload


class InvalidTargetError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="invalid_target", message=message, details=details)


class InvalidKernelError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="invalid_kernel", message=message, details=details)


class InvalidCovarianceError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="invalid_covariance", message=message, details=details)


class ConditioningError(PLMCError):
    """Raised when a covariance or Gram matrix is too close to singular to factor or invert."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="conditioning_error", message=message, details=details)


class InvalidBatchError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="invalid_batch", message=message, details=details)


class InvalidScheduleError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="invalid_schedule", message=message, details=details)


class DiagnosticUnavailableError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="diagnostic_unavailable", message=message, details=details)


class EstimatorMismatchError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="estimator_mismatch", message=message, details=details)


class InvalidCurveError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="invalid_curve", message=message, details=details)


class QuadratureError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="quadrature_error", message=message, details=details)


class PreconditionError(PLMCError):
    """Raised when the hypothesis of a certified inequality does not hold for the inputs."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="precondition_error", message=message, details=details)


class ConfigError(PLMCError):
    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(code="invalid_config", message=message, exit_status=EXIT_CONFIG, details=details)


class UnknownSelectorError(PLMCError):
    def __init__(self, selector: str, choices: list[str]) -> None:
        super().__init__(
            code="unknown_selector",
            message=f"unknown selector {selector!r}",
            exit_status=EXIT_CONFIG,
            details={"choices": choices},
        )


__all__ = [
    "EXIT_CONFIG",
    "EXIT_ERROR",
    "EXIT_NOT_ATTAINED",
    "EXIT_OK",
    "EXIT_VERIFICATION_FAILED",
    "ConditioningError",
    "ConfigError",
    "DiagnosticUnavailableError",
    "EstimatorMismatchError",
    "InvalidBatchError",
    "InvalidCovarianceError",
    "InvalidCurveError",
    "InvalidKernelError",
    "InvalidScheduleError",
    "InvalidTargetError",
    "PLMCError",
    "PreconditionError",
    "QuadratureError",
    "UnknownSelectorError",
]
