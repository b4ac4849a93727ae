"""Command-line entry point: ``trotter-dixmier <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .. import dixmier_trace as dt
from ..ideal_norms import NormKind, NormKindError, operator_ideal_norm
from ..kato_functions import builtin, from_callable, validate_kato
from .config import ExperimentConfig, default_config
from .experiment import EXIT_CONFIG, run_experiment
from .matrix_io import read_matrix


def _cmd_norms(args) -> int:
    try:
        kind = NormKind.parse(args.kind)
        M = read_matrix(args.matrix)
    except (NormKindError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{operator_ideal_norm(M, kind):.17e}")
    return 0


def _cmd_trace(args) -> int:
    try:
        s = dt.make_model_spectrum(args.model, args.n, c=args.c, t=args.t, r=args.r)
        est = dt.estimate_dixmier_trace(s, args.window, args.tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps({
        "model": args.model,
        "n": args.n,
        "value": est.value,
        "window": list(est.window),
        "slope": est.slope,
        "converged": est.converged,
        "window_min": est.window_min,
        "window_max": est.window_max,
    }, indent=2))
    return 0


def _cmd_validate_kato(args) -> int:
    try:
        if args.function == "cos":
            h = from_callable(lambda s: np.clip(np.cos(s), 0.0, 1.0), "cos")
        else:
            h = builtin(args.function, args.a)
        report = validate_kato(h, beta=args.beta)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps(report.as_dict(), indent=2))
    return 0 if report.passed else 1


def _cmd_trotter(args) -> int:
    if args.print_default:
        print(default_config().dumps())
        return 0
    config = args.config if args.config else default_config()
    return run_experiment(config, args.out)


def _cmd_selftest(args) -> int:
    from ..acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trotter-dixmier",
                                description="Ideal norms, Dixmier traces and Trotter-Kato rates.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norms", help="symmetric norm of a matrix file")
    s.add_argument("matrix")
    s.add_argument("--kind", required=True,
                   help="operator, dixmier, schatten:P, weak:P, macaev:P or pi:ALPHA")
    s.set_defaults(func=_cmd_norms)

    s = sub.add_parser("trace", help="Dixmier trace estimate of a model spectrum")
    s.add_argument("--model", required=True, choices=["harmonic", "log_semigroup", "trace_class"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c", type=float, default=1.0)
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--r", type=float, default=0.5)
    s.add_argument("--window", type=float, default=dt.DEFAULT_WINDOW)
    s.add_argument("--tol", type=float, default=dt.DEFAULT_SLOPE_TOL)
    s.set_defaults(func=_cmd_trace)

    s = sub.add_parser("validate-kato", help="check Kato-function conditions on a grid")
    s.add_argument("--function", required=True, choices=["exp", "resolvent_power", "cos"])
    s.add_argument("--a", type=float, default=None)
    s.add_argument("--beta", type=float, default=2.0)
    s.set_defaults(func=_cmd_validate_kato)

    s = sub.add_parser("trotter", help="run a convergence experiment")
    s.add_argument("--config", help="JSON config (default experiment if omitted)")
    s.add_argument("--out", help="output directory (overrides the config)")
    s.add_argument("--print-default", action="store_true", help="print the default config and exit")
    s.set_defaults(func=_cmd_trotter)

    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
