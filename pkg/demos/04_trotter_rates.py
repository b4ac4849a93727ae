"""Convergence rates of the four product formulas.

Discrete Laplacian plus a bounded potential, both N x N.  The one-sided
products converge like 1/n; on finite matrices the symmetric ones show
second order.  Errors are measured in the operator and Dixmier norms.
"""
from trotter_dixmier import NormKind, builtin
from trotter_dixmier.trotter_kato import SplittingProblem, error_curves, fit_rate
from trotter_dixmier.harness import build_operator, default_config

cfg = default_config()
pb = SplittingProblem.build(build_operator(cfg.A), build_operator(cfg.B))
f = g = builtin("exp")
kinds = (NormKind.operator(), NormKind.dixmier())

for scheme in ("FG", "GF", "F_sym", "T_sym"):
    curves = error_curves(scheme, f, g, pb, t=1.0, n_grid=cfg.n_grid, norm_kinds=kinds)
    for label, curve in curves.items():
        fit = fit_rate(curve)
        tail = ", ".join(f"{e:.2e}" for e in curve.errors[-3:])
        print(f"{scheme:6s} {label:9s} gamma={fit.gamma:.3f}  r2={fit.r_squared:.5f}  last errors {tail}")
