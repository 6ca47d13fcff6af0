"""Environment settings and service wiring."""

from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

from .core.kernel import configure_kernel_cache
from .jobs.chains import ChainPool
from .services.experiments import ExperimentService
from .services.verification import VerificationService
from .util.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class PLMCSettings:
    log_level: str = "INFO"
    max_workers: int = 4
    kernel_cache_size: int = 4096
    output_dir: Path = Path(".")
    record_timing: bool = False


@dataclass(slots=True)
class ServiceContainer:
    pool: ChainPool
    experiments: ExperimentService
    verification: VerificationService

    def close(self) -> None:
        self.pool.shutdown()


def load_settings(env: Mapping[str, str] | None = None) -> PLMCSettings:
    env = os.environ if env is None else env
    try:
        max_workers = int(env.get("PLMC_MAX_WORKERS", "4"))
        cache_size = int(env.get("PLMC_KERNEL_CACHE_SIZE", "4096"))
    except ValueError as exc:
        raise ConfigError("PLMC_MAX_WORKERS and PLMC_KERNEL_CACHE_SIZE must be integers") from exc
    if max_workers < 1:
        raise ConfigError("PLMC_MAX_WORKERS must be at least 1", details={"value": max_workers})
    if cache_size < 0:
        raise ConfigError("PLMC_KERNEL_CACHE_SIZE must be non-negative", details={"value": cache_size})
    return PLMCSettings(
        log_level=env.get("PLMC_LOG_LEVEL", "INFO").upper(),
        max_workers=max_workers,
        kernel_cache_size=cache_size,
        output_dir=Path(env.get("PLMC_OUTPUT_DIR", ".")),
        record_timing=_coerce_bool(env.get("PLMC_RECORD_TIMING"), default=False),
    )


def build_services(settings: PLMCSettings) -> ServiceContainer:
    configure_kernel_cache(settings.kernel_cache_size)
    pool = ChainPool(max_workers=settings.max_workers)
    experiments = ExperimentService(pool, record_timing=settings.record_timing)
    verification = VerificationService()
    return ServiceContainer(pool=pool, experiments=experiments, verification=verification)


def _coerce_bool(value: str | None, default: bool) -> bool:
    if value is None:
        return default
    normalized = value.strip().lower()
    if normalized in {"1", "true", "yes", "on"}:
        return True
    if normalized in {"0", "false", "no", "off"}:
        return False
    return default


__all__ = ["PLMCSettings", "ServiceContainer", "build_services", "load_settings"]
