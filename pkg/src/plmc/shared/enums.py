"""Shared vocabularies used across samplers, services and the command line."""

from __future__ import annotations

from enum import StrEnum


class Dynamics(StrEnum):
    """Which Langevin diffusion is being discretized."""

    overdamped = "overdamped"
    underdamped = "underdamped"

    @classmethod
    def from_flag(cls, raw: str | None) -> Dynamics:
        """Parse a command-line spelling (``over``/``under`` or the full name)."""
        if not raw:
            return cls.overdamped
        key = raw.strip().lower()
        if key in {"over", "overdamped", "olmc"}:
            return cls.overdamped
        if key in {"under", "underdamped", "ulmc", "kinetic"}:
            return cls.underdamped
        raise ValueError(f"unknown dynamics {raw!r}")


class Method(StrEnum):
    euler = "euler"
    poisson = "poisson"

    @classmethod
    def from_flag(cls, raw: str | None) -> Method:
        if not raw:
            return cls.poisson
        key = raw.strip().lower()
        if key in {"euler", "lmc", "em"}:
            return cls.euler
        if key in {"poisson", "plmc", "midpoint"}:
            return cls.poisson
        raise ValueError(f"unknown method {raw!r}")


class Estimator(StrEnum):
    moment = "moment"
    sliced = "sliced"
    exact_1d = "exact_1d"


class VerifySuite(StrEnum):
    kernels = "kernels"
    bridge = "bridge"
    coupling = "coupling"
    assumption = "assumption"


class InterpolantConvention(StrEnum):
    """Which partial noise sum enters the cheap interpolant at inner index i.

    ``exclusive`` uses the sum over j < i, ``inclusive`` the sum over j <= i.
    """

    exclusive = "exclusive"
    inclusive = "inclusive"


class BatchMode(StrEnum):
    skip_ahead = "skip_ahead"
    naive = "naive"


__all__ = ["BatchMode", "Dynamics", "Estimator", "InterpolantConvention", "Method", "VerifySuite"]
