"""Helpers for parsing grid and list arguments."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError


def parse_float_list(raw: str | None, *, name: str, minimum_count: int = 1) -> list[float]:
    if raw is None or not raw.strip():
        raise ConfigError(f"{name} must be a comma-separated list of numbers")
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"{name} must be a comma-separated list of numbers") from exc
    if len(values) < minimum_count:
        raise ConfigError(f"{name} needs at least {minimum_count} values", details={"got": len(values)})
    return values


def parse_grid(raw: str, *, name: str = "grid") -> list[float]:
    """Parse ``a:b:n`` into ``n`` geometrically spaced points from ``a`` to ``b`` inclusive."""
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{name} must look like a:b:n", details={"value": raw})
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"{name} must look like a:b:n", details={"value": raw}) from exc
    if start <= 0 or stop <= 0 or count < 1:
        raise ConfigError(f"{name} needs positive endpoints and at least one point", details={"value": raw})
    if count == 1:
        return [start]
    return [float(value) for value in np.geomspace(start, stop, count)]


__all__ = ["parse_float_list", "parse_grid"]
