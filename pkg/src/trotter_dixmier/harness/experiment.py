"""Run a Trotter-Kato convergence experiment and write its results.

Outputs, in ``output_dir``:

* ``errors_<scheme>_<norm>.csv`` with columns ``scheme,norm,t,n,error``,
  written as soon as each scheme finishes;
* ``summary.json`` holding rate fits, lifting-bound and trace-error reports
  and the acceptance verdicts.

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.
"""
from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

from ..ideal_norms import NormKind
from ..trotter_kato import (
    RateFitError,
    SplittingProblem,
    error_curves,
    fit_rate,
    lifting_bound_check,
    sandwich_norm,
    trace_error_check,
)
from .config import ExperimentConfig, parse_function
from .operators import ConfigError, build_operator

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
UNSYMMETRIC = ("FG", "GF")
JUDGED_NORMS = ("operator", "dixmier")
GAMMA_BAND = (0.9, 1.1)
MIN_R2 = 0.98
MIN_GAMMA_SYM = 0.9


def _fmt(x: float) -> str:
    return f"{x:.17e}"


def write_curve_csv(path: Path, curve) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scheme", "norm", "t", "n", "error"])
        for n, err in curve.samples:
            w.writerow([curve.scheme, curve.norm_kind, _fmt(curve.t), n, _fmt(err)])


def _judge_fit(scheme: str, norm: str, fit) -> tuple[bool, str]:
    if norm not in JUDGED_NORMS:
        return True, "reported only"
    if scheme in UNSYMMETRIC:
        ok = GAMMA_BAND[0] <= fit.gamma <= GAMMA_BAND[1] and fit.r_squared >= MIN_R2
        return ok, f"gamma in {list(GAMMA_BAND)} and r2 >= {MIN_R2}"
    return fit.gamma >= MIN_GAMMA_SYM, f"gamma >= {MIN_GAMMA_SYM}"


def execute(config: ExperimentConfig, output_dir=None) -> tuple[int, dict]:
    """Run ``config``; return ``(exit_code, summary)``."""
    config.validate()
    out = Path(output_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    f, g = parse_function(config.f), parse_function(config.g)
    kinds = config.norm_kinds()
    labels = [k.label for k in kinds]
    pb = SplittingProblem.build(build_operator(config.A), build_operator(config.B))
    t = float(config.t)
    t0 = config.t0_fraction * t

    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "t0": t0,
        "schemes": {},
        "failures": [],
    }
    failures = summary["failures"]

    def flush():
        (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    for scheme in config.schemes:
        log.info("scheme %s", scheme)
        curves = error_curves(scheme, f, g, pb, t=t, n_grid=config.n_grid, norm_kinds=kinds)
        entry = {"fits": {}}
        for label in labels:
            curve = curves[label]
            write_curve_csv(out / f"errors_{scheme}_{label.replace(':', '')}.csv", curve)
            try:
                fit = fit_rate(curve)
            except RateFitError as exc:
                entry["fits"][label] = {"skipped": "roundoff floor", "detail": str(exc)}
                continue
            ok, rule = _judge_fit(scheme, label, fit)
            entry["fits"][label] = {**fit.as_dict(), "criterion": rule, "passed": ok}
            if not ok:
                failures.append(f"rate {scheme}/{label}: gamma={fit.gamma:.4f} r2={fit.r_squared:.4f}")

        if "operator" in curves and "dixmier" in curves:
            Fn = sandwich_norm(f, g, pb, t0=t0, kind=NormKind.dixmier())
            lift = lifting_bound_check(curves["operator"], curves["dixmier"], Fn)
            lift_ok = lift.n0 is not None and lift.n0 <= config.max_n0 and not lift.violations
            entry["lifting"] = {**lift.as_dict(), "passed": lift_ok}
            if not lift_ok:
                failures.append(f"lifting {scheme}: n0={lift.n0}")

        checks = [trace_error_check(scheme, f, g, pb, t=t, n=n) for n in config.n_grid]
        entry["trace_error"] = [c.as_dict() for c in checks]
        bad = [c.n for c in checks if not c.passed]
        if bad:
            failures.append(f"trace error {scheme}: violations at n={bad}")
        summary["schemes"][scheme] = entry
        flush()

    summary["passed"] = not failures
    flush()
    return (EXIT_OK if not failures else EXIT_FAIL), summary


def run_experiment(config, output_dir=None) -> int:
    """Load (if needed), validate and run; map errors to exit codes."""
    try:
        if not isinstance(config, ExperimentConfig):
            config = ExperimentConfig.load(config)
        config.validate()
    except (ConfigError, OSError) as exc:
        log.error("configuration error: %s", exc)
        print(f"configuration error: {exc}")
        return EXIT_CONFIG
    code, summary = execute(config, output_dir)
    for msg in summary["failures"]:
        print(f"FAIL {msg}")
    return code
