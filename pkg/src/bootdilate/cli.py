"""Command line front end for the Monte Carlo experiments.

    bootdilate table1     --n 100 --mc-reps 500 --bootstrap-reps 500 --out t1.csv
    bootdilate table2     --n 50  --subsample-size 45 --out t2.csv
    bootdilate rate-study --dimension 2 --out rates.csv
    bootdilate cara-check --grid 0:1:0.001

Flags may also be supplied in a config file of ``key=value`` lines (keys are
the long flag names, ``#`` starts a comment, repeatable flags take comma
lists); explicit command line flags win.  Exit codes: 0 success, 1 usage
error, 2 failed cara-check.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    RATE_FIELDS,
    TABLE_FIELDS,
    CaraCheckResult,
    ExperimentConfig,
    format_table,
    run_cara_check,
    run_rate_study,
    run_table1,
    run_table2,
    write_csv,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; this interface reserves 2
    # for a failed cara-check, so remap usage errors to 1
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


class UsageError(Exception):
    pass


DEFAULTS = {
    "table1": dict(n=100, mc_reps=500, bootstrap_reps=500, num_subsamples=500,
                   subsample_size=None, alpha=(0.01, 0.05, 0.10), seed=0,
                   grid=(-3.0, 3.0, 0.01), dimension=1, workers=1, out=None),
    "table2": dict(n=100, mc_reps=500, bootstrap_reps=500, num_subsamples=500,
                   subsample_size=None, alpha=(0.01, 0.05, 0.10), seed=0,
                   grid=(-3.0, 3.0, 0.01), dimension=1, workers=1, out=None),
    # desk-scale defaults: the full study costs minutes per (n, replicate)
    "rate-study": dict(n=100, mc_reps=2, bootstrap_reps=100, num_subsamples=500,
                       subsample_size=None, alpha=(0.01, 0.05, 0.10), seed=0,
                       grid=(-3.0, 3.0, 0.01), dimension=2, workers=1, out=None),
    "cara-check": dict(n=100, mc_reps=1, bootstrap_reps=1, num_subsamples=1,
                       subsample_size=None, alpha=(0.05,), seed=0,
                       grid=(0.0, 3.0, 0.001), dimension=1, workers=1, out=None,
                       lambda_lo=0.5, lambda_hi=2.0, eta=0.1),
}


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"grid must be numeric lo:hi:step, got {text!r}") from exc
    if not (step > 0 and lo < hi):
        raise UsageError(f"grid needs lo < hi and step > 0, got {text!r}")
    return lo, hi, step


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bootdilate",
                     description="Monte Carlo experiments for dilation-based confidence regions")
    sub = parser.add_subparsers(dest="design", required=True)
    for name in ("table1", "table2", "rate-study", "cara-check"):
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=str, default=None,
                       help="key=value file supplying defaults for any flag")
        p.add_argument("--n", type=int, default=None, help="sample size per world")
        p.add_argument("--mc-reps", type=int, default=None, help="number of Monte Carlo worlds")
        p.add_argument("--bootstrap-reps", type=int, default=None,
                       help="bootstrap replicates per world")
        p.add_argument("--subsample-size", type=int, action="append", default=None,
                       help="subsample size (repeatable; table2 defaults per n)")
        p.add_argument("--num-subsamples", type=int, default=None,
                       help="subsamples per world (table2)")
        p.add_argument("--alpha", type=float, action="append", default=None,
                       help="level (repeatable; default 0.01 0.05 0.10)")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--grid", type=str, default=None,
                       help="theta grid as lo:hi:step (write --grid=-3:3:0.01 "
                            "when lo is negative)")
        p.add_argument("--dimension", type=int, default=None, help="point dimension (rate-study)")
        p.add_argument("--workers", type=int, default=None, help="parallel worker processes")
        p.add_argument("--out", type=str, default=None, help="write CSV here")
        if name == "cara-check":
            p.add_argument("--lambda-lo", type=float, default=None,
                           help="lower bound on the optimal portfolio share")
            p.add_argument("--lambda-hi", type=float, default=None,
                           help="upper bound on the optimal portfolio share")
            p.add_argument("--eta", type=float, default=None, help="dilation radius")
            p.add_argument("--inject-mismatch", action="store_true",
                           help=argparse.SUPPRESS)
    return parser


def _load_config_file(path: str) -> dict:
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_CONFIG_PARSERS = {
    "n": int, "mc-reps": int, "bootstrap-reps": int, "num-subsamples": int,
    "seed": int, "dimension": int, "workers": int, "out": str,
    "grid": _parse_grid,
    "alpha": lambda s: tuple(float(p) for p in s.split(",") if p.strip()),
    "subsample-size": lambda s: tuple(int(p) for p in s.split(",") if p.strip()),
    "lambda-lo": float, "lambda-hi": float, "eta": float,
}


def _effective(args: argparse.Namespace, config_values: dict, design: str) -> dict:
    defaults = DEFAULTS[design]
    merged = dict(defaults)
    for key, text in config_values.items():
        if key not in _CONFIG_PARSERS:
            raise UsageError(f"unknown config key {key!r}")
        dest = key.replace("-", "_")
        if dest not in merged and dest not in ("lambda_lo", "lambda_hi", "eta"):
            raise UsageError(f"config key {key!r} does not apply to {design}")
        try:
            merged[dest] = _CONFIG_PARSERS[key](text)
        except (ValueError, UsageError) as exc:
            raise UsageError(f"bad config value for {key}: {exc}") from exc
    for dest, value in vars(args).items():
        if dest in ("design", "config") or value is None:
            continue
        if dest == "grid":
            value = _parse_grid(value)
        if dest == "alpha":
            value = tuple(value)
        if dest == "subsample_size":
            value = tuple(value)
        merged[dest] = value
    return merged


def _to_experiment_config(design: str, merged: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            design=design,
            n=merged["n"],
            mc_reps=merged["mc_reps"],
            bootstrap_reps=merged["bootstrap_reps"],
            num_subsamples=merged["num_subsamples"],
            subsample_sizes=merged.get("subsample_size"),
            alphas=tuple(merged["alpha"]),
            seed=merged["seed"],
            grid=merged["grid"],
            dimension=merged["dimension"],
            workers=merged["workers"],
            out=merged.get("out"),
            lambda_lo=merged.get("lambda_lo", 0.5),
            lambda_hi=merged.get("lambda_hi", 2.0),
            eta=merged.get("eta", 0.1),
            inject_mismatch=bool(merged.get("inject_mismatch", False)),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _run(config: ExperimentConfig) -> int:
    if config.design == "cara-check":
        result: CaraCheckResult = run_cara_check(config)
        print(f"analytic interval: [{result.analytic[0]:.6f}, {result.analytic[1]:.6f}]")
        print(f"scan interval:     [{result.scanned[0]:.6f}, {result.scanned[1]:.6f}]")
        print(f"tolerance (one grid step): {result.step}")
        print("MATCH" if result.ok else "MISMATCH")
        return 0 if result.ok else 2
    if config.design == "table1":
        rows = run_table1(config)
        fields = TABLE_FIELDS
        summary_fields = TABLE_FIELDS + ("reject_rate_endpoints",)
    elif config.design == "table2":
        rows = run_table2(config)
        fields = summary_fields = TABLE_FIELDS
    else:
        rows = run_rate_study(config)
        fields = summary_fields = RATE_FIELDS
    print(format_table(rows, summary_fields))
    if config.out:
        write_csv(rows, config.out, fields)
        print(f"wrote {config.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config_values = _load_config_file(args.config) if args.config else {}
        merged = _effective(args, config_values, args.design)
        config = _to_experiment_config(args.design, merged)
        return _run(config)
    except UsageError as exc:
        print(f"bootdilate: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
