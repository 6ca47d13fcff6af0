"""Build gradient oracles from target configuration."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..contracts.experiment import TargetConfig
from ..core.potential import (
    PotentialSpec,
    load_logistic_csv,
    make_logistic,
    make_quadratic,
    synthesize_logistic_data,
)
from ..util.errors import InvalidTargetError

logger = logging.getLogger(__name__)


def build_target(config: TargetConfig) -> PotentialSpec:
    if config.name == "quadratic":
        dim = len(config.precision) if config.precision is not None else config.dim
        precision = config.precision if config.precision is not None else [1.0] * dim
        mean = config.mean if config.mean is not None else [0.0] * len(precision)
        spec = make_quadratic(precision, mean)
    elif config.name == "logistic":
        if config.data_path:
            features, labels = load_logistic_csv(Path(config.data_path))
        else:
            features, labels = synthesize_logistic_data(config.n_samples, config.dim, config.data_seed)
        spec = make_logistic(config.alpha, features, labels)
    else:  # pragma: no cover - guarded by the contract
        raise InvalidTargetError(f"unknown target {config.name!r}")
    logger.info(f"[SAMPLE] target {spec.name} d={spec.dim} alpha={spec.alpha:.6g} L={spec.ell:.6g}")
    return spec


def reference_samples(spec: PotentialSpec, n: int, seed: int) -> np.ndarray:
    """Exact draws from the target, available for Gaussian targets only."""
    if spec.gaussian is None:
        raise InvalidTargetError(f"target {spec.name} has no exact sampler")
    return spec.gaussian.sample(n, np.random.default_rng(np.random.SeedSequence([seed, 0x5EED])))


__all__ = ["build_target", "reference_samples"]
