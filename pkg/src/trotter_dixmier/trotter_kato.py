"""Trotter-Kato approximants, their errors against the exact semigroup, and
the rate / lifting / trace checks built on top of them.

Schemes (``tau = t/n``):

* ``FG``    -- ``[f(tau A) g(tau B)]^n``
* ``GF``    -- ``[g(tau B) f(tau A)]^n``
* ``F_sym`` -- ``F(tau)^n`` with ``F(s) = g(sB/2) f(sA) g(sB/2)``
* ``T_sym`` -- ``T(tau)^n`` with ``T(s) = f(sA/2) g(sB) f(sA/2)``
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os

import numpy as np

from .dixmier_trace import trace_sequence
from .ideal_norms import NormKind, dixmier_norm
from .spectral_core import EigenSystem, apply_spectral_function, psd_eigensystem, singular_values

SCHEMES = ("FG", "GF", "F_sym", "T_sym")
ERROR_FLOOR = 1e-13
ROUNDOFF_CEILING = 1e-12  # curves never rising above this carry no rate information
LIFTING_ATOL = 1e-12  # roundoff allowance when both sides of the bound are ~0
THREADS_ENV = "TROTTER_DIXMIER_THREADS"


class RateFitError(ValueError):
    pass


@dataclass(frozen=True)
class SplittingProblem:
    """Cached eigensystems of ``A``, ``B`` and ``C = A + B``."""

    A: np.ndarray
    B: np.ndarray
    eig_A: EigenSystem
    eig_B: EigenSystem
    eig_C: EigenSystem

    @classmethod
    def build(cls, A, B) -> "SplittingProblem":
        A = np.asarray(A)
        B = np.asarray(B)
        if A.shape != B.shape:
            raise ValueError(f"A and B shapes differ: {A.shape} vs {B.shape}")
        return cls(A, B, psd_eigensystem(A), psd_eigensystem(B), psd_eigensystem(A + B))

    @property
    def dim(self) -> int:
        return self.A.shape[0]


def _problem(A, B=None) -> SplittingProblem:
    if isinstance(A, SplittingProblem):
        return A
    return SplittingProblem.build(A, B)


def _exp(s):
    return np.exp(-s)


def exact_semigroup(A, B=None, t: float = 1.0) -> np.ndarray:
    """``exp(-t (A + B))`` through the eigendecomposition of ``A + B``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return apply_spectral_function(_exp, _problem(A, B).eig_C, t)


def step_factor(scheme: str, f, g, A, B=None, tau: float = 1.0) -> np.ndarray:
    """One step of ``scheme`` at time ``tau``."""
    pb = _problem(A, B)
    if scheme == "FG":
        return apply_spectral_function(f, pb.eig_A, tau) @ apply_spectral_function(g, pb.eig_B, tau)
    if scheme == "GF":
        return apply_spectral_function(g, pb.eig_B, tau) @ apply_spectral_function(f, pb.eig_A, tau)
    if scheme == "F_sym":
        gh = apply_spectral_function(g, pb.eig_B, tau / 2)
        out = gh @ apply_spectral_function(f, pb.eig_A, tau) @ gh
    elif scheme == "T_sym":
        fh = apply_spectral_function(f, pb.eig_A, tau / 2)
        out = fh @ apply_spectral_function(g, pb.eig_B, tau) @ fh
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    return 0.5 * (out + np.conj(out.T))


def approximant(scheme: str, f, g, A, B=None, t: float = 1.0, n: int = 1) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = np.linalg.matrix_power(step_factor(scheme, f, g, A, B, t / n), n)
    if scheme in ("F_sym", "T_sym"):
        out = 0.5 * (out + np.conj(out.T))
    return out


@dataclass(frozen=True)
class ErrorCurve:
    scheme: str
    norm_kind: str
    t: float
    ns: tuple
    errors: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ValueError("n grid must be strictly increasing")

    @property
    def samples(self) -> list:
        return list(zip(self.ns, self.errors))

    def error_at(self, n: int) -> float:
        return self.errors[self.ns.index(n)]


def _floor(x: float) -> float:
    return 0.0 if x < ERROR_FLOOR else x


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def error_spectra(scheme, f, g, A, B=None, t: float = 1.0, n_grid=(8,)) -> list:
    """Singular values of ``approximant - exact`` for each ``n``, in grid order."""
    pb = _problem(A, B)
    exact = exact_semigroup(pb, t=t)
    ns = [int(n) for n in n_grid]

    def one(n):
        return singular_values(approximant(scheme, f, g, pb, t=t, n=n) - exact)

    threads = _thread_count()
    if threads > 1 and len(ns) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(one, ns))
    return [one(n) for n in ns]


def error_curves(scheme, f, g, A, B=None, t: float = 1.0, n_grid=(8,),
                 norm_kinds=(NormKind.operator(),)) -> dict:
    """``{label: ErrorCurve}`` for several norms sharing one set of spectra."""
    spectra = error_spectra(scheme, f, g, A, B, t, n_grid)
    ns = tuple(int(n) for n in n_grid)
    out = {}
    for kind in norm_kinds:
        errs = tuple(_floor(kind(s)) for s in spectra)
        out[kind.label] = ErrorCurve(scheme, kind.label, float(t), ns, errs)
    return out


def error_curve(scheme, f, g, A, B=None, t: float = 1.0, n_grid=(8,),
                norm_kind: NormKind = NormKind.operator()) -> ErrorCurve:
    return error_curves(scheme, f, g, A, B, t, n_grid, (norm_kind,))[norm_kind.label]


@dataclass(frozen=True)
class RateFit:
    gamma: float
    Gamma: float
    r_squared: float
    window: tuple
    points: int
    excluded: tuple = ()

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "Gamma": self.Gamma, "r_squared": self.r_squared,
                "window": list(self.window), "points": self.points, "excluded": list(self.excluded)}


def fit_rate(curve: ErrorCurve, window=None, skip: int = 2) -> RateFit:
    """Least-squares fit of ``ln error = ln Gamma - gamma ln n``.

    ``window`` is an inclusive ``(n_lo, n_hi)``; by default the ``skip``
    smallest grid points are dropped.  Zero (floored) errors are excluded and
    listed in ``excluded``.  A window whose largest error is still below
    ``ROUNDOFF_CEILING`` is rejected as pure roundoff.
    """
    ns = np.asarray(curve.ns, dtype=float)
    errs = np.asarray(curve.errors, dtype=float)
    if window is None:
        mask = np.arange(ns.size) >= skip
    else:
        lo, hi = window
        mask = (ns >= lo) & (ns <= hi)
    zero = mask & (errs <= 0)
    use = mask & (errs > 0)
    if use.sum() < 4:
        raise RateFitError(f"need >= 4 positive errors in window, have {int(use.sum())}")
    if np.max(errs[use]) <= ROUNDOFF_CEILING:
        raise RateFitError(f"all errors in window are below {ROUNDOFF_CEILING:g} (roundoff)")
    x, y = np.log(ns[use]), np.log(errs[use])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(
        gamma=float(-slope),
        Gamma=float(math.exp(intercept)),
        r_squared=min(max(r2, 0.0), 1.0),
        window=(int(ns[use][0]), int(ns[use][-1])),
        points=int(use.sum()),
        excluded=tuple(int(n) for n in ns[zero]),
    )


def sandwich_norm(f, g, A, B=None, t0: float = 0.25, kind: NormKind = NormKind.dixmier()) -> float:
    """``||F(t0)||`` in the ideal norm ``kind``."""
    return kind(singular_values(step_factor("F_sym", f, g, A, B, t0)))


@dataclass
class LiftingReport:
    Gamma_t0: float
    F_t0_norm: float
    rows: list  # (n, ideal_error, bound, margin)
    n0: int | None
    violations: list = field(default_factory=list)  # n >= n0 with bound broken (always empty)

    @property
    def passed(self) -> bool:
        return self.n0 is not None

    def as_dict(self) -> dict:
        return {
            "Gamma_t0": self.Gamma_t0,
            "F_t0_norm": self.F_t0_norm,
            "n0": self.n0,
            "violations": self.violations,
            "rows": [{"n": n, "ideal_error": e, "bound": b, "margin": m} for n, e, b, m in self.rows],
        }


def lifting_bound_check(op_curve: ErrorCurve, ideal_curve: ErrorCurve, F_t0_norm: float,
                        Gamma_t0: float | None = None, rate: float = 1.0,
                        atol: float = LIFTING_ATOL) -> LiftingReport:
    """Check ``ideal(n) <= Gamma * ||F(t0)|| * (eps([n/2]) + eps([(n+1)/2]))``.

    ``Gamma * eps(k)`` with ``eps(k) = k**-rate`` is the operator-norm error
    bound; when ``Gamma_t0`` is not given it is calibrated as the smallest
    constant that dominates the measured curve, ``max_n op_error(n) n**rate``.
    ``n0`` is the smallest grid point from which the bound holds for every
    larger grid point (``None`` if it fails at the largest one).  A row
    holds when ``ideal <= bound + atol``; ``atol`` only matters once both
    sides are at roundoff level.
    """
    if op_curve.ns != ideal_curve.ns or op_curve.t != ideal_curve.t:
        raise ValueError("curves must share the n grid and t")
    ns = op_curve.ns
    if Gamma_t0 is None:
        Gamma_t0 = max(e * n ** rate for n, e in op_curve.samples)
    rows = []
    for n, err in ideal_curve.samples:
        if n < 3:
            continue
        k, m = n // 2, (n + 1) // 2
        bound = Gamma_t0 * F_t0_norm * (k ** -rate + m ** -rate)
        rows.append((n, err, bound, bound - err))
    n0 = None
    for n, err, bound, margin in reversed(rows):
        if err > bound + atol:
            break
        n0 = n
    violations = [n for n, e, b, _ in rows if n0 is not None and n >= n0 and e > b + atol]
    return LiftingReport(float(Gamma_t0), float(F_t0_norm), rows, n0, violations)


@dataclass
class TraceErrorReport:
    scheme: str
    n: int
    N: int
    delta_T_N: float
    dixmier_error: float
    max_excess: float  # max over k <= N of |T_k(P) - T_k(Q)| - ||P - Q||_{1,inf}

    @property
    def passed(self) -> bool:
        return self.delta_T_N <= self.dixmier_error + 1e-12 and self.max_excess <= 1e-12

    def as_dict(self) -> dict:
        return {"scheme": self.scheme, "n": self.n, "N": self.N, "delta_T_N": self.delta_T_N,
                "dixmier_error": self.dixmier_error, "max_excess": self.max_excess,
                "passed": self.passed}


def trace_error_check(scheme, f, g, A, B=None, t: float = 1.0, n: int = 8) -> TraceErrorReport:
    """``|T_N(approximant) - T_N(exact)| <= ||approximant - exact||_{1,inf}``, N = dim."""
    pb = _problem(A, B)
    P = approximant(scheme, f, g, pb, t=t, n=n)
    Q = exact_semigroup(pb, t=t)
    tp = trace_sequence(P).tee
    tq = trace_sequence(Q).tee
    dn = dixmier_norm(singular_values(P - Q))
    diff = np.abs(tp - tq)
    return TraceErrorReport(scheme, int(n), pb.dim, float(diff[-1]), float(dn),
                            float(np.max(diff - dn)))
