"""Command-line front end: ``realitykit <experiment> [options]``.

Exit codes: 0 success, 1 a check failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import ConfigError
from .experiments import EXPERIMENTS, ExperimentConfig, parse_number, run

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _numbers(text: str) -> float:
    try:
        return parse_number(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realitykit", description="Reality-quantifier experiments.")
    p.add_argument("--version", action="version", version=f"realitykit {__version__}")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--alpha", type=_numbers, nargs="+", help="Renyi orders, e.g. 1/8 0.25")
    p.add_argument("--q", type=_numbers, nargs="+", help="Tsallis indices")
    p.add_argument("--steps", type=int, help="grid points per axis")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (CSV or JSONL)")
    p.add_argument("--mode", choices=("monotone", "exploratory"), default="monotone")
    p.add_argument("--phi", type=_numbers, nargs="+", help="polar angles for mu-sweep")
    p.add_argument("--theta", type=_numbers, nargs="+", help="azimuths for the mu-sweep spread check")
    p.add_argument("--batch", type=int, default=500, help="samples per axiom-suite check")
    p.add_argument("--only", nargs="+", default=(), help="axiom-suite check-id prefixes")
    p.add_argument("--quiet", action="store_true")
    return p


def config_from_args(args) -> ExperimentConfig:
    kw = dict(experiment=args.experiment, steps=args.steps, seed=args.seed, out=args.out,
              mode=args.mode, batch=args.batch, only=tuple(args.only))
    if args.alpha:
        kw["alphas"] = tuple(args.alpha)
    if args.q:
        kw["qs"] = tuple(args.q)
    if args.phi:
        kw["phis"] = tuple(args.phi)
    if args.theta:
        kw["thetas"] = tuple(args.theta)
    return ExperimentConfig(**kw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        result = run(cfg)
    except ConfigError as exc:
        print(f"realitykit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not args.quiet:
        print(f"wrote {result.path}")
        for name, ok in result.checks.items():
            if not ok or cfg.experiment != "axiom-suite":
                print(f"{'PASS' if ok else 'FAIL'} {name}")
        print(json.dumps(result.summary, default=float, sort_keys=True))
    return EXIT_OK if result.ok else EXIT_FAIL
