"""Base contract for validated configuration and report documents."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class BaseContract(BaseModel):
    """Base contract with common configuration."""

    model_config = ConfigDict(
        from_attributes=True,
        validate_assignment=True,
        arbitrary_types_allowed=True,
    )


class ErrorDetail(BaseModel):
    """Error detail structure."""

    code: str
    message: str
    details: dict | None = None


class ErrorResponse(BaseModel):
    """Standard error document printed by the command line."""

    error: ErrorDetail
