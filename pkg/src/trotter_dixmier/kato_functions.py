"""Kato functions: scalar maps ``h`` on ``[0, inf)`` with ``0 <= h <= 1``,
``h(0) = 1`` and ``h'(+0) = -1``, plus grid-based evidence for the
``K_beta`` conditions.

Evaluating ``h(s) - 1 + s`` for tiny ``s`` cancels catastrophically, so a
function may carry ``minus_one``, an accurate evaluator of ``h(s) - 1``.
The builtins supply one via ``expm1``/``log1p``; products compose them.
Without it the naive difference is used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

RICHARDSON_STEPS = (1e-3, 5e-4, 2.5e-4)
DERIVATIVE_TOL = 1e-6
GRID_RANGE = (1e-8, 1e3)
GRID_POINTS = 2000
EPSILON_TABLE = (1e-3, 1e-2, 1e-1, 1.0, 10.0)


class KatoValidationError(ValueError):
    def __init__(self, message: str, report: "KatoValidationReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class KatoFunction:
    evaluator: Callable[[np.ndarray], np.ndarray]
    name: str
    params: dict = field(default_factory=dict)
    declared_beta: float = 2.0
    minus_one: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, s):
        return self.evaluator(np.asarray(s, dtype=float))

    def hm1(self, s) -> np.ndarray:
        """``h(s) - 1``, accurately when ``minus_one`` is available."""
        s = np.asarray(s, dtype=float)
        if self.minus_one is not None:
            return self.minus_one(s)
        return self.evaluator(s) - 1.0


def _exp() -> KatoFunction:
    return KatoFunction(lambda s: np.exp(-s), "exp", {}, 2.0, lambda s: np.expm1(-s))


def _resolvent_power(a: float) -> KatoFunction:
    if not a > 0:
        raise ValueError(f"resolvent_power needs a > 0, got {a}")
    return KatoFunction(
        lambda s: (1.0 + s / a) ** (-a),
        "resolvent_power",
        {"a": float(a)},
        2.0,
        lambda s: np.expm1(-a * np.log1p(s / a)),
    )


def builtin(name: str, a: float | None = None) -> KatoFunction:
    """``exp`` (``e^-s``) or ``resolvent_power`` (``(1 + s/a)^-a``, default a = 1)."""
    if name == "exp":
        return _exp()
    if name in ("resolvent_power", "resolvent"):
        return _resolvent_power(1.0 if a is None else a)
    raise ValueError(f"unknown builtin Kato function {name!r}")


def default_grid(points: int = GRID_POINTS, lo: float = GRID_RANGE[0],
                 hi: float = GRID_RANGE[1]) -> np.ndarray:
    return np.geomspace(lo, hi, points)


def right_derivative(h: KatoFunction, steps=RICHARDSON_STEPS) -> float:
    """Two-level Richardson extrapolation of ``(h(s) - 1)/s`` at halving steps."""
    s = np.asarray(steps, dtype=float)
    if s.size != 3 or not np.allclose(s[1:] / s[:-1], 0.5):
        raise ValueError("expected three halving steps")
    d = h.hm1(s) / s
    r1 = 2.0 * d[1:] - d[:-1]
    return float((4.0 * r1[1] - r1[0]) / 3.0)


def beta_seminorm(h: KatoFunction, beta: float = 2.0, grid=None) -> float:
    """Grid maximum of ``|h(s) - 1 + s| / s**beta``; a lower bound of the sup."""
    if not 1 < beta <= 2:
        raise ValueError(f"beta must lie in (1, 2], got {beta}")
    s = default_grid() if grid is None else np.asarray(grid, dtype=float)
    s = s[s > 0]
    return float(np.max(np.abs(h.hm1(s) + s) / s ** beta))


def delta_table(h: KatoFunction, grid=None, epsilons=EPSILON_TABLE) -> dict:
    """``eps -> 1 - max{h(s) : s in grid, s >= eps}``."""
    s = default_grid() if grid is None else np.asarray(grid, dtype=float)
    out = {}
    for eps in epsilons:
        tail = s[s >= eps]
        out[float(eps)] = float(1.0 - np.max(h(tail))) if tail.size else float("nan")
    return out


@dataclass
class KatoValidationReport:
    name: str
    value_at_zero: float
    right_derivative: float
    range_ok: bool
    delta_of_eps: dict
    beta: float
    beta_seminorm: float
    verdict: dict

    @property
    def passed(self) -> bool:
        return all(self.verdict.values())

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value_at_zero": self.value_at_zero,
            "right_derivative": self.right_derivative,
            "range_ok": self.range_ok,
            "delta_of_eps": {f"{k:g}": v for k, v in self.delta_of_eps.items()},
            "beta": self.beta,
            "beta_seminorm": self.beta_seminorm,
            "verdict": dict(self.verdict),
            "passed": self.passed,
        }


def validate_kato(h: KatoFunction, grid=None, beta: float = 2.0) -> KatoValidationReport:
    s = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if s.size < 200:
        raise ValueError("validation grid needs at least 200 points")
    h0 = float(h(np.array([0.0]))[0])
    deriv = right_derivative(h)
    vals = h(s)
    range_ok = bool(np.all((vals >= 0.0) & (vals <= 1.0)) and 0.0 <= h0 <= 1.0)
    deltas = delta_table(h, s)
    seminorm = beta_seminorm(h, beta, s)
    verdict = {
        "value_at_zero": abs(h0 - 1.0) <= 1e-12,
        "right_derivative": abs(deriv + 1.0) <= DERIVATIVE_TOL,
        "range": range_ok,
        "delta_positive": all(d > 0 for d in deltas.values()),
        "beta_seminorm_finite": bool(np.isfinite(seminorm)),
    }
    return KatoValidationReport(h.name, h0, deriv, range_ok, deltas, beta, seminorm, verdict)


def product_closure(f: KatoFunction, g: KatoFunction, weights=(1.0, 1.0),
                    strict: bool = True) -> KatoFunction:
    """Pointwise product ``h(s) = f(a s) g(b s)`` for weights ``(a, b)``.

    Derivatives at zero add, so only weights with ``a + b = 1`` keep the
    normalisation ``h'(+0) = -1``.  With ``strict`` the product is validated
    and a failure raises :class:`KatoValidationError` carrying the report.
    """
    a, b = (float(w) for w in weights)

    def evaluator(s):
        return f(a * s) * g(b * s)

    def minus_one(s):
        fm, gm = f.hm1(a * s), g.hm1(b * s)
        return fm * gm + fm + gm

    h = KatoFunction(
        evaluator,
        f"{f.name}({a:g}s)*{g.name}({b:g}s)",
        {"factors": (f.name, g.name), "weights": (a, b)},
        min(f.declared_beta, g.declared_beta),
        minus_one,
    )
    if strict:
        report = validate_kato(h)
        if not report.passed:
            failed = [k for k, ok in report.verdict.items() if not ok]
            raise KatoValidationError(f"{h.name} fails: {', '.join(failed)}", report)
    return h


def sandwich_function(f: KatoFunction, g: KatoFunction) -> KatoFunction:
    """``g(s/2) f(s) g(s/2)``, the scalar symbol of the symmetric F-family."""

    def evaluator(s):
        gh = g(0.5 * s)
        return gh * f(s) * gh

    def minus_one(s):
        gm, fm = g.hm1(0.5 * s), f.hm1(s)
        # (1+gm)^2 (1+fm) - 1
        return (gm * gm + 2.0 * gm) * (1.0 + fm) + fm

    return KatoFunction(evaluator, f"{g.name}(s/2){f.name}(s){g.name}(s/2)", {},
                        min(f.declared_beta, g.declared_beta), minus_one)


def from_callable(func: Callable, name: str = "custom", declared_beta: float = 2.0) -> KatoFunction:
    return KatoFunction(lambda s: np.asarray(func(s), dtype=float), name, {}, declared_beta)
