"""Step size, batch size and batch count that reach a target accuracy.

The constants ``c1..c4`` of the complexity bounds are existential; they default to 1 and only
the scaling in epsilon, kappa and d is meaningful.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from ..contracts.experiment import SamplerConfig, ScheduleInputs
from ..shared.enums import Dynamics, Method
from ..util.errors import InvalidScheduleError

logger = logging.getLogger(__name__)

_ROUNDING_SLACK = 1e-12
OVERDAMPED_STEP_LIMIT = 1.0 / 8.0
UNDERDAMPED_INNER_FACTOR = 0.94


@dataclass(slots=True)
class ScheduleResult:
    config: SamplerConfig
    requested_inner_step: float
    realized_inner_step: float
    k_raw: float
    n_raw: float
    warnings: list[str] = field(default_factory=list)


def round_up(value: float) -> int:
    """Ceiling that ignores floating-point excess below one part in 1e12, never below 1."""
    return max(1, math.ceil(value * (1.0 - _ROUNDING_SLACK)))


def _check(inputs: ScheduleInputs) -> None:
    if not (math.isfinite(inputs.epsilon) and inputs.epsilon > 0):
        raise InvalidScheduleError("epsilon must be positive", details={"epsilon": inputs.epsilon})
    if not inputs.alpha > 0 or inputs.ell < inputs.alpha:
        raise InvalidScheduleError(
            "need 0 < alpha <= ell", details={"alpha": inputs.alpha, "ell": inputs.ell}
        )
    if inputs.dim < 1:
        raise InvalidScheduleError("dimension must be at least 1", details={"dim": inputs.dim})


def _warn(result: ScheduleResult, message: str) -> None:
    result.warnings.append(message)
    logger.warning(f"[SCHEDULE] {message}")


def overdamped_schedule(inputs: ScheduleInputs, *, method: Method = Method.poisson) -> ScheduleResult:
    _check(inputs)
    eps, alpha, ell, dim = inputs.epsilon, inputs.alpha, inputs.ell, inputs.dim
    kappa = ell / alpha
    eta = inputs.c1 * min(
        alpha ** (1.0 / 3.0) * eps ** (2.0 / 3.0) / ell ** (4.0 / 3.0),
        eps ** (2.0 / 3.0) / (dim ** (1.0 / 3.0) * ell),
    )
    k_raw = 4.0 * eta * ell / eps**2
    n_raw = inputs.c2 * (kappa ** (4.0 / 3.0) + kappa * dim ** (1.0 / 3.0)) / eps ** (2.0 / 3.0)
    k, n = round_up(k_raw), round_up(n_raw)
    config = SamplerConfig(eta=eta, k=k, n_batches=n, dynamics=Dynamics.overdamped, method=method)
    result = ScheduleResult(
        config=config,
        requested_inner_step=eps**2 / (4.0 * ell),
        realized_inner_step=eta / k,
        k_raw=k_raw,
        n_raw=n_raw,
    )
    if eps >= 1.0:
        _warn(result, f"epsilon={eps:.6g} is outside the small-epsilon regime of the bound")
    if eta * ell > OVERDAMPED_STEP_LIMIT:
        _warn(result, f"eta*L={eta * ell:.6g} exceeds 1/8")
    logger.debug(f"[SCHEDULE] overdamped eps={eps:.6g} eta={eta:.6g} k={k} n={n}")
    return result


def underdamped_schedule(inputs: ScheduleInputs, *, method: Method = Method.poisson) -> ScheduleResult:
    _check(inputs)
    eps, alpha, ell, dim, p = inputs.epsilon, inputs.alpha, inputs.ell, inputs.dim, inputs.p
    kappa = ell / alpha
    root_ell = math.sqrt(ell)
    gamma = inputs.gamma_c * root_ell
    eta = inputs.c3 * min(
        eps ** (1.0 / 3.0) / (kappa ** (1.0 / 6.0) * dim ** (1.0 / 6.0) * root_ell),
        eps ** ((p + 2.0) / (4.0 * p + 3.0))
        / (kappa ** (3.0 * p / (8.0 * p + 6.0)) * dim ** (p / (4.0 * p + 3.0)) * root_ell),
    )
    requested = UNDERDAMPED_INNER_FACTOR * eps * math.sqrt(alpha) / (ell * math.sqrt(2.0))
    k_raw = eta / requested
    n_raw = inputs.c4 * (
        kappa ** (7.0 / 6.0) * dim ** (1.0 / 6.0) / eps ** (1.0 / 3.0)
        + kappa ** ((11.0 * p + 6.0) / (8.0 * p + 6.0))
        * dim ** (p / (4.0 * p + 3.0))
        / eps ** ((p + 2.0) / (4.0 * p + 3.0))
    )
    k, n = round_up(k_raw), round_up(n_raw)
    config = SamplerConfig(
        eta=eta, k=k, gamma=gamma, n_batches=n, dynamics=Dynamics.underdamped, method=method
    )
    result = ScheduleResult(
        config=config,
        requested_inner_step=requested,
        realized_inner_step=eta / k,
        k_raw=k_raw,
        n_raw=n_raw,
    )
    if eps >= 1.0:
        _warn(result, f"epsilon={eps:.6g} is outside the small-epsilon regime of the bound")
    if inputs.gamma_c < 2.0:
        _warn(result, f"friction constant {inputs.gamma_c:.6g} is below 2")
    if gamma * eta >= 1.0:
        _warn(result, f"gamma*eta={gamma * eta:.6g} is not small")
    logger.debug(f"[SCHEDULE] underdamped eps={eps:.6g} eta={eta:.6g} k={k} n={n} gamma={gamma:.6g}")
    return result


def schedule_for(inputs: ScheduleInputs, dynamics: Dynamics, method: Method = Method.poisson) -> ScheduleResult:
    """Schedule for ``dynamics``; the Euler baseline runs the same inner step for ``N·K`` steps."""
    if dynamics == Dynamics.overdamped:
        result = overdamped_schedule(inputs)
    else:
        result = underdamped_schedule(inputs)
    if method == Method.euler:
        result.config = as_euler(result.config)
    return result


def as_euler(config: SamplerConfig) -> SamplerConfig:
    """Plain Langevin Monte Carlo at the inner step ``eta / k`` for ``n_batches · k`` steps."""
    if config.method == Method.euler:
        return config
    return SamplerConfig(
        eta=config.eta / config.k,
        k=1,
        gamma=config.gamma,
        n_batches=config.n_batches * config.k,
        dynamics=config.dynamics,
        method=Method.euler,
    )


__all__ = [
    "OVERDAMPED_STEP_LIMIT",
    "ScheduleResult",
    "as_euler",
    "overdamped_schedule",
    "round_up",
    "schedule_for",
    "underdamped_schedule",
]
