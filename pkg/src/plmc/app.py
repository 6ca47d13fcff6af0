"""Command-line factory for the plmc sampler benchmarks and verification suites."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from .contracts.base import ErrorResponse
from .contracts.experiment import ExperimentConfig, TargetConfig
from .contracts.reports import RunReport
from .deps import PLMCSettings, ServiceContainer, build_services, load_settings
from .services.experiments import SAMPLE_COLUMNS, SWEEP_COLUMNS, sample_rows, sweep_rows
from .shared.enums import Dynamics, Estimator, Method, VerifySuite
from .util.errors import (
    EXIT_CONFIG,
    EXIT_NOT_ATTAINED,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    ConfigError,
    PLMCError,
)
from .util.output import render_json, write_csv, write_json
from .util.parsing import parse_float_list, parse_grid

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plmc", description="Poisson-midpoint Langevin Monte Carlo benchmarks")
    commands = parser.add_subparsers(dest="command", required=True)

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", help="CSV destination; stdout when omitted")

    experiment = argparse.ArgumentParser(add_help=False, parents=[output])
    experiment.add_argument("--config", help="JSON experiment configuration")
    experiment.add_argument("--seed", type=int)
    experiment.add_argument("--chains", type=int)
    experiment.add_argument("--epsilons", help="comma-separated accuracy targets for sweeps")
    experiment.add_argument("--epsilon", type=float)
    experiment.add_argument("--method", help="euler or poisson")
    experiment.add_argument("--dynamics", help="over or under")
    experiment.add_argument("--p", type=int, help="smoothness order used by the schedules")
    experiment.add_argument("--estimators", help="comma-separated subset of moment,sliced,exact_1d")

    commands.add_parser("sample", parents=[experiment], help="run chains and estimate W2 to the target")
    commands.add_parser("sweep", parents=[experiment], help="gradient calls needed per accuracy target")

    kernels = commands.add_parser("verify-kernels", parents=[output], help="exact kernel identities")
    kernels.add_argument("--gamma", type=float, default=2.0)
    kernels.add_argument("--h-grid", default="1e-4:1e-1:10", help="a:b:n geometric grid of step sizes")

    bridge = commands.add_parser("verify-bridge", parents=[output], help="noise bridge covariance checks")
    bridge.add_argument("--k", type=int, default=8)
    bridge.add_argument("--eta", type=float, default=0.05)
    bridge.add_argument("--gamma", type=float, default=2.0)
    bridge.add_argument("--n-mc", type=int, default=100_000)
    bridge.add_argument("--seed", type=int, default=0)

    coupling = commands.add_parser("verify-coupling", parents=[output], help="coupling inequality certificates")
    coupling.add_argument("--grid", help="comma-separated beta values")
    coupling.add_argument("--n-quad", type=int)

    assumption = commands.add_parser("verify-assumption", parents=[output], help="probe convexity and smoothness")
    assumption.add_argument("--config", help="JSON experiment configuration supplying the target")
    assumption.add_argument("--target", choices=["quadratic", "logistic"])
    assumption.add_argument("--precision", help="comma-separated diagonal precision")
    assumption.add_argument("--alpha", type=float)
    assumption.add_argument("--dim", type=int)
    assumption.add_argument("--n-samples", type=int)
    assumption.add_argument("--data-seed", type=int)
    assumption.add_argument("--data-path")
    assumption.add_argument("--pairs", type=int, default=1000)
    assumption.add_argument("--radius", type=float, default=5.0)
    assumption.add_argument("--seed", type=int, default=0)
    return parser


def main(
    argv: Sequence[str] | None = None,
    *,
    settings: PLMCSettings | None = None,
    services: ServiceContainer | None = None,
) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_CONFIG

    owned = services is None
    try:
        settings = settings or load_settings()
        _configure_logging(settings)
        services = services or build_services(settings)
    except PLMCError as exc:
        return _fail(exc)

    try:
        return _dispatch(args, settings, services)
    except PLMCError as exc:
        return _fail(exc)
    finally:
        if owned:
            services.close()


def _configure_logging(settings: PLMCSettings) -> None:
    level = getattr(logging, settings.log_level, logging.INFO)
    logging.basicConfig(
        level=level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s", stream=sys.stderr
    )
    logging.getLogger("plmc").setLevel(level)


def _fail(exc: PLMCError) -> int:
    logger.error(f"[CLI] {exc}")
    document = ErrorResponse.model_validate(exc.to_dict())
    sys.stderr.write(render_json(document.model_dump(exclude_none=True)))
    return exc.exit_status


def _dispatch(args: argparse.Namespace, settings: PLMCSettings, services: ServiceContainer) -> int:
    if args.command in {"sample", "sweep"}:
        config = load_experiment_config(args)
        out = args.out or config.output_path
        if args.command == "sample":
            report = services.experiments.run_sample(config)
            _emit(report, sample_rows(report), list(SAMPLE_COLUMNS), out, settings)
            return EXIT_OK
        report = services.experiments.run_sweep(config)
        columns = list(SWEEP_COLUMNS)
        if any(row.wall_time is not None for row in report.rows):
            columns.append("wall_time")
        _emit(report, sweep_rows(report), columns, out, settings)
        return EXIT_OK if report.passed else EXIT_NOT_ATTAINED

    suite, parameters = _verify_parameters(args)
    report = services.verification.run_verify(suite, **parameters)
    table = report.verification[0]
    _emit(report, table.rows, table.columns, args.out, settings)
    if not report.passed:
        logger.warning(f"[VERIFY] {suite.value} failed")
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def _read_config_file(raw: str | None) -> dict[str, Any]:
    if not raw:
        return {}
    path = Path(raw)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {path}", details={"line": exc.lineno}) from exc
    if not isinstance(payload, dict):
        raise ConfigError("config document must be a JSON object")
    return payload


def load_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge the JSON document with command-line overrides and validate the result."""
    payload = _read_config_file(args.config)
    try:
        if args.dynamics is not None:
            payload["dynamics"] = Dynamics.from_flag(args.dynamics).value
        if args.method is not None:
            payload["method"] = Method.from_flag(args.method).value
        if args.estimators is not None:
            payload["estimators"] = [Estimator(part.strip()).value for part in args.estimators.split(",") if part]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if args.seed is not None:
        payload["seed"] = args.seed
    if args.chains is not None:
        payload["n_chains"] = args.chains
    if args.epsilons is not None:
        payload["epsilons"] = parse_float_list(args.epsilons, name="--epsilons")

    sampler = payload.get("sampler")
    if isinstance(sampler, dict):
        if args.epsilon is not None or args.p is not None:
            raise ConfigError("--epsilon and --p apply to schedules, not to an explicit sampler")
        sampler.setdefault("dynamics", payload.get("dynamics", Dynamics.overdamped.value))
        sampler.setdefault("method", payload.get("method", Method.poisson.value))
        if args.dynamics is not None:
            sampler["dynamics"] = payload["dynamics"]
        if args.method is not None:
            sampler["method"] = payload["method"]
    elif "schedule" not in payload or args.epsilon is not None or args.p is not None:
        schedule = dict(payload.get("schedule") or {})
        if args.epsilon is not None:
            schedule["epsilon"] = args.epsilon
        if args.p is not None:
            schedule["p"] = args.p
        payload["schedule"] = schedule

    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError("invalid experiment configuration", details={"errors": _validation_errors(exc)}) from exc


def _validation_errors(exc: ValidationError) -> list[dict[str, str]]:
    return [
        {"loc": ".".join(str(part) for part in error["loc"]), "msg": error["msg"]} for error in exc.errors()
    ]


def _target_from_args(args: argparse.Namespace) -> TargetConfig:
    payload = _read_config_file(args.config).get("target", {})
    overrides = {
        "name": args.target,
        "alpha": args.alpha,
        "dim": args.dim,
        "n_samples": args.n_samples,
        "data_seed": args.data_seed,
        "data_path": args.data_path,
    }
    payload.update({key: value for key, value in overrides.items() if value is not None})
    if args.precision is not None:
        payload["precision"] = parse_float_list(args.precision, name="--precision")
    try:
        return TargetConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError("invalid target configuration", details={"errors": _validation_errors(exc)}) from exc


def _verify_parameters(args: argparse.Namespace) -> tuple[VerifySuite, dict[str, Any]]:
    if args.command == "verify-kernels":
        if not args.gamma > 0:
            raise ConfigError("--gamma must be positive")
        return VerifySuite.kernels, {"gamma": args.gamma, "h_grid": parse_grid(args.h_grid, name="--h-grid")}
    if args.command == "verify-bridge":
        if args.k < 1 or not args.eta > 0 or not args.gamma > 0 or args.n_mc < 1:
            raise ConfigError("--k, --eta, --gamma and --n-mc must be positive")
        parameters = {"k": args.k, "eta": args.eta, "gamma": args.gamma, "n_mc": args.n_mc, "seed": args.seed}
        return VerifySuite.bridge, parameters
    if args.command == "verify-coupling":
        parameters = {}
        if args.grid is not None:
            parameters["betas"] = parse_float_list(args.grid, name="--grid")
        if args.n_quad is not None:
            parameters["n_quad"] = args.n_quad
        return VerifySuite.coupling, parameters
    if args.pairs < 1 or not args.radius > 0:
        raise ConfigError("--pairs and --radius must be positive")
    parameters = {"target": _target_from_args(args), "n_pairs": args.pairs, "radius": args.radius, "seed": args.seed}
    return VerifySuite.assumption, parameters


def _resolve(raw: str, settings: PLMCSettings) -> Path:
    path = Path(raw)
    return path if path.is_absolute() else settings.output_dir / path


def _emit(
    report: RunReport,
    rows: Sequence[dict[str, Any]],
    columns: Sequence[str],
    out: str | None,
    settings: PLMCSettings,
) -> None:
    payload = report.model_dump(mode="json")
    if out:
        csv_path = _resolve(out, settings)
        write_csv(rows, columns, csv_path)
        json_path = csv_path.with_suffix(".json")
        if json_path == csv_path:
            json_path = csv_path.with_name(f"{csv_path.name}.json")
        logger.info(f"[CLI] wrote {csv_path} and {json_path}")
    else:
        write_csv(rows, columns, sys.stdout)
        json_path = settings.output_dir / REPORT_NAME
    write_json(payload, json_path)


__all__ = ["build_parser", "load_experiment_config", "main"]
