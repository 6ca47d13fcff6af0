"""Write a seeded ridge-logistic data set as CSV for use as a ``data_path`` target."""

from __future__ import annotations

import argparse
import os
import sys
from collections.abc import Sequence
from pathlib import Path

from ..core.potential import dump_logistic_csv, synthesize_logistic_data
from ..util.errors import PLMCError


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        return default


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="plmc-make-logistic-data", description=__doc__)
    parser.add_argument("path", type=Path)
    parser.add_argument("--n-samples", type=int, default=_int_env("PLMC_LOGISTIC_SAMPLES", 200))
    parser.add_argument("--dim", type=int, default=_int_env("PLMC_LOGISTIC_DIM", 2))
    parser.add_argument("--seed", type=int, default=_int_env("PLMC_LOGISTIC_SEED", 0))
    args = parser.parse_args(argv)

    try:
        features, labels = synthesize_logistic_data(args.n_samples, args.dim, args.seed)
    except PLMCError as exc:
        print(f"Could not generate data: {exc}", file=sys.stderr)
        return exc.exit_status
    if args.path.exists():
        print(f"Overwriting existing data set {args.path}")
    dump_logistic_csv(args.path, features, labels)
    print(f"Wrote {len(labels)} rows with {features.shape[1]} features to {args.path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
