"""Acceptance checks, shared by the test-suite and ``trotter-dixmier selftest``.

Each ``criterion_*`` function returns a :class:`CriterionResult`; ``run_all``
evaluates them in order.  Tolerances are fixed module constants.
"""
from __future__ import annotations

from dataclasses import dataclass
import tempfile
import time

import numpy as np
import scipy.linalg

from . import dixmier_trace as dt
from . import ideal_norms as inorm
from .harness.config import default_config
from .harness.experiment import execute
from .kato_functions import builtin, from_callable, validate_kato
from .spectral_core import operator_norm, random_psd, singular_values
from .trotter_kato import SplittingProblem, approximant, exact_semigroup

RUNTIME_BUDGET_S = 60.0
AXIOM_RTOL = 1e-9
INEQ_TOL = 1e-10
ORACLE_TOL = 1e-9


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail}"


AXIOM_KINDS = (
    inorm.NormKind.schatten(1),
    inorm.NormKind.schatten(2),
    inorm.NormKind.operator(),
    inorm.NormKind.dixmier(),
    inorm.NormKind.weak(2),
    inorm.NormKind.macaev(1),
    inorm.NormKind.macaev(2),
    inorm.NormKind.pi(alpha=1.0),
)


_default_run = {}


def default_experiment() -> tuple[int, dict, float]:
    """Run (once per process) the default experiment into a scratch directory."""
    if "result" not in _default_run:
        with tempfile.TemporaryDirectory() as tmp:
            start = time.perf_counter()
            code, summary = execute(default_config(), tmp)
            _default_run["result"] = (code, summary, time.perf_counter() - start)
    return _default_run["result"]


def criterion_1_rates() -> CriterionResult:
    _, summary, elapsed = default_experiment()
    parts, ok = [], elapsed <= RUNTIME_BUDGET_S
    for scheme, entry in summary["schemes"].items():
        for norm in ("operator", "dixmier"):
            fit = entry["fits"][norm]
            good = fit.get("passed", False)
            ok &= good
            parts.append(f"{scheme}/{norm} gamma={fit.get('gamma', float('nan')):.3f}"
                         f" r2={fit.get('r_squared', float('nan')):.4f}")
    return CriterionResult(1, "rate reproduction", ok,
                           f"{'; '.join(parts)}; runtime {elapsed:.1f}s <= {RUNTIME_BUDGET_S:.0f}s")


def criterion_2_lifting() -> CriterionResult:
    _, summary, _ = default_experiment()
    parts, ok = [], True
    for scheme, entry in summary["schemes"].items():
        lift = entry["lifting"]
        ok &= lift["passed"]
        parts.append(f"{scheme} n0={lift['n0']}")
    return CriterionResult(2, "lifting bound", ok, ", ".join(parts) + " (need n0 <= 32, zero violations)")


def criterion_3_trace_estimator() -> CriterionResult:
    parts, ok = [], True
    for c in (1.0, 2.5):
        est = dt.estimate_dixmier_trace(dt.make_model_spectrum("harmonic", 100_000, c=c),
                                        window_fraction=0.5, slope_tol=0.01)
        good = est.converged and abs(est.value - c) <= 0.05 * c
        ok &= good
        parts.append(f"harmonic({c:g}) -> {est.value:.5f} (need within 5%)")
    est = dt.estimate_dixmier_trace(dt.make_model_spectrum("trace_class", 1000, r=0.5))
    value = est.value if est.value is not None else est.window_max
    good = value <= 0.13 and est.slope < 0
    ok &= good
    parts.append(f"trace_class(0.5) -> {value:.5f} (need <= 0.13), slope {est.slope:.4f} (need < 0)")
    return CriterionResult(3, "Dixmier trace estimator", ok, "; ".join(parts))


def criterion_4_trace_rate() -> CriterionResult:
    _, summary, _ = default_experiment()
    total, bad = 0, 0
    for entry in summary["schemes"].values():
        for row in entry["trace_error"]:
            total += 1
            bad += not row["passed"]
    return CriterionResult(4, "trace-rate bound", bad == 0 and total > 0,
                           f"{bad} violations over {total} (scheme, n) pairs")


def criterion_5_axioms(samples: int = 200, dim: int = 8, seed: int = 5) -> CriterionResult:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples, dim, dim)) + 1j * rng.standard_normal((samples, dim, dim))
    reports = inorm.check_symmetric_norm_axioms(AXIOM_KINDS, X, rng=rng, rtol=AXIOM_RTOL)
    failed = {k: {a: c for a, c in r.failures.items() if c} for k, r in reports.items() if not r.passed}
    worst = max(max(r.worst.values()) for r in reports.values())
    return CriterionResult(5, "norm axiom suite", not failed,
                           f"{len(reports)} kinds x {samples} samples, worst violation {worst:.2e}"
                           + (f", failures {failed}" if failed else ""))


def _majorized_pair(rng, length: int = 20):
    eta = -np.sort(-np.abs(rng.standard_normal(length)) ** rng.uniform(0.5, 3.0))
    k = rng.integers(1, 4)
    weights = rng.dirichlet(np.ones(k))
    mixed = sum(w * eta[rng.permutation(length)] for w in weights)
    xi = inorm.decreasing_rearrangement(mixed) * rng.uniform(0.2, 1.0)
    return xi, eta


def criterion_6_inequalities(seed: int = 6) -> CriterionResult:
    rng = np.random.default_rng(seed)
    counts = {"ky_fan": 0, "sandwich": 0, "horn_ky_fan": 0, "abc": 0}
    worst = 0.0
    for _ in range(500):
        xi, eta = _majorized_pair(rng)
        if not inorm.ky_fan_dominates(xi, eta):
            counts["ky_fan"] += 1
            continue
        for kind in AXIOM_KINDS:
            a, b = kind(xi), kind(eta)
            v = (a - b) / b
            worst = max(worst, v)
            counts["ky_fan"] += int(v > INEQ_TOL)
            for s, val in ((xi, a), (eta, b)):
                lo, hi = s[0], np.sum(s)
                counts["sandwich"] += int(lo - val > INEQ_TOL * hi or val - hi > INEQ_TOL * hi)
    for _ in range(100):
        X, Y = random_psd(8, rng), random_psd(8, rng)
        counts["horn_ky_fan"] += not dt.horn_ky_fan_check(X, Y, tol=INEQ_TOL).passed
    for _ in range(100):
        A, B, C = (rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)) for _ in range(3))
        lhs = inorm.dixmier_norm(singular_values(A @ B @ C))
        rhs = operator_norm(A) * inorm.dixmier_norm(singular_values(B)) * operator_norm(C)
        counts["abc"] += int(lhs > rhs * (1 + INEQ_TOL))
    ok = not any(counts.values())
    return CriterionResult(6, "inequality suites", ok,
                           f"violations {counts}; worst Ky Fan relative excess {worst:.2e}")


def _direct_product(scheme, A, B, t, n):
    ea = lambda s: scipy.linalg.expm(-s * A)
    eb = lambda s: scipy.linalg.expm(-s * B)
    tau = t / n
    step = {
        "FG": lambda: ea(tau) @ eb(tau),
        "GF": lambda: eb(tau) @ ea(tau),
        "F_sym": lambda: eb(tau / 2) @ ea(tau) @ eb(tau / 2),
        "T_sym": lambda: ea(tau / 2) @ eb(tau) @ ea(tau / 2),
    }[scheme]()
    out = np.eye(A.shape[0])
    for _ in range(n):
        out = out @ step
    return out


def criterion_7_oracles(instances: int = 20, seed: int = 7) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = {"singular_values": 0.0, "exact_semigroup": 0.0, "approximant": 0.0}
    f = g = builtin("exp")
    schemes = ("FG", "GF", "F_sym", "T_sym")
    for i in range(instances):
        M = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        ref = np.sqrt(np.clip(np.linalg.eigvalsh(np.conj(M.T) @ M), 0, None))[::-1]
        worst["singular_values"] = max(worst["singular_values"],
                                       float(np.max(np.abs(singular_values(M) - ref))))
        A = random_psd(6, rng)
        B = random_psd(6, rng)
        A, B = A / operator_norm(A), B / operator_norm(B)
        t = rng.uniform(0.5, 2.0)
        ref = scipy.linalg.expm(-t * (A + B))
        worst["exact_semigroup"] = max(worst["exact_semigroup"],
                                       float(np.max(np.abs(exact_semigroup(A, B, t) - ref))))
        pb = SplittingProblem.build(A, B)
        scheme = schemes[i % 4]
        n = int(rng.integers(1, 9))
        got = approximant(scheme, f, g, pb, t=t, n=n)
        worst["approximant"] = max(worst["approximant"],
                                   float(np.max(np.abs(got - _direct_product(scheme, A, B, t, n)))))
    ok = all(v <= ORACLE_TOL for v in worst.values())
    return CriterionResult(7, "oracle equivalences", ok,
                           ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" (tol {ORACLE_TOL:g})")


def criterion_8_kato() -> CriterionResult:
    r_exp = validate_kato(builtin("exp"))
    r_res = validate_kato(builtin("resolvent_power", 1.0))
    r_cos = validate_kato(from_callable(lambda s: np.clip(np.cos(s), 0.0, 1.0), "cos"))
    ok = (r_exp.passed and abs(r_exp.beta_seminorm - 0.5) <= 0.005
          and r_res.passed and abs(r_res.beta_seminorm - 1.0) <= 0.005
          and not r_cos.verdict["right_derivative"])
    return CriterionResult(8, "Kato validation", ok,
                           f"exp [h]_2={r_exp.beta_seminorm:.4f}, resolvent_power(1) [h]_2="
                           f"{r_res.beta_seminorm:.4f}, cos derivative {r_cos.right_derivative:.2e} "
                           f"({'rejected' if not r_cos.verdict['right_derivative'] else 'accepted'})")


CRITERIA = (
    criterion_1_rates,
    criterion_2_lifting,
    criterion_3_trace_estimator,
    criterion_4_trace_rate,
    criterion_5_axioms,
    criterion_6_inequalities,
    criterion_7_oracles,
    criterion_8_kato,
)


def run_all() -> list:
    return [c() for c in CRITERIA]
