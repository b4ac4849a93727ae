"""Symmetric norming functions on finite sequences and the operator norms
they induce through singular values.

Every norm here first takes the decreasing rearrangement of its input, so
permuting entries or flipping their signs never changes the value.  All
suprema over ``n`` run up to the length of the (finite) spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .spectral_core import random_unitary, singular_values


class NormKindError(ValueError):
    pass


def decreasing_rearrangement(seq) -> np.ndarray:
    """Absolute values sorted non-increasing."""
    x = np.abs(np.asarray(seq)).astype(float).ravel()
    if not np.all(np.isfinite(x)):
        raise ValueError("sequence has non-finite entries")
    return -np.sort(-x)


def _pad(x: np.ndarray, n: int) -> np.ndarray:
    if x.size >= n:
        return x
    return np.concatenate([x, np.zeros(n - x.size)])


def schatten_norm(s, p: float) -> float:
    if not p >= 1:
        raise NormKindError(f"Schatten exponent must be >= 1, got {p}")
    x = decreasing_rearrangement(s)
    if x.size == 0:
        return 0.0
    if math.isinf(p):
        return float(x[0])
    if p == 1:
        return float(np.sum(x))
    top = x[0]
    if top == 0:
        return 0.0
    return float(top * np.sum((x / top) ** p) ** (1.0 / p))


def ky_fan_norm(s, r: int) -> float:
    """Sum of the ``r`` largest entries (the trivial-ideal norming function)."""
    if r < 1:
        raise NormKindError("r must be >= 1")
    return float(np.sum(decreasing_rearrangement(s)[:r]))


@dataclass(frozen=True)
class PiWeights:
    """Non-increasing positive weights with first entry 1."""

    weights: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-D sequence")
        if abs(w[0] - 1.0) > 1e-15:
            raise ValueError(f"first weight must be 1, got {w[0]}")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if np.any(np.diff(w) > 0):
            raise ValueError("weights must be non-increasing")
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    @classmethod
    def power(cls, alpha: float, length: int) -> "PiWeights":
        """``pi_j = j**-alpha``; ``alpha = 1`` gives the harmonic weights."""
        if not alpha > 0:
            raise ValueError("alpha must be positive")
        return cls(tuple(np.arange(1, length + 1, dtype=float) ** -alpha))

    @property
    def length(self) -> int:
        return len(self.weights)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights)

    def regularity_ratio(self) -> float:
        """``sum(pi_j, j<=n) / (n * pi_n)`` at ``n = length``.

        Bounded values indicate a regular sequence; the harmonic weights grow
        like ``ln n``.  Diagnostic only.
        """
        w = self.as_array()
        return float(np.sum(w) / (w.size * w[-1]))


def pi_norm(s, weights: PiWeights) -> float:
    x = decreasing_rearrangement(s)
    w = weights.as_array()
    if x.size > w.size:
        raise ValueError(f"spectrum length {x.size} exceeds weight length {w.size}")
    if x.size == 0:
        return 0.0
    return float(np.max(np.cumsum(x) / np.cumsum(w[: x.size])))


def weak_norm(s, p: float) -> float:
    if not p > 1:
        raise NormKindError(f"weak-C_p exponent must be > 1 (use dixmier_norm for p = 1), got {p}")
    x = decreasing_rearrangement(s)
    if x.size == 0:
        return 0.0
    n = np.arange(1, x.size + 1, dtype=float)
    return float(np.max(np.cumsum(x) * n ** (-(1.0 - 1.0 / p))))


def dixmier_norm(s) -> float:
    """``sup_n sigma_n / (1 + ln n)``, natural logarithm."""
    x = decreasing_rearrangement(s)
    if x.size == 0:
        return 0.0
    n = np.arange(1, x.size + 1, dtype=float)
    return float(np.max(np.cumsum(x) / (1.0 + np.log(n))))


def macaev_norm(s, p: float = 1.0) -> float:
    if not p >= 1 or math.isinf(p):
        raise NormKindError(f"Macaev exponent must lie in [1, inf), got {p}")
    x = decreasing_rearrangement(s)
    n = np.arange(1, x.size + 1, dtype=float)
    return float(np.sum(n ** (-1.0 / p) * x))


def dixmier_pi_ratio(s) -> float:
    """Ratio of the Dixmier norm to the harmonic-weight Pi norm.

    The two norms are equivalent on the weak-C_1 ideal; no constant is
    asserted, the ratio is reported.
    """
    x = decreasing_rearrangement(s)
    den = pi_norm(x, PiWeights.power(1.0, max(x.size, 1)))
    return dixmier_norm(x) / den if den > 0 else float("nan")


@dataclass(frozen=True)
class NormKind:
    """Tag plus parameter selecting one symmetric norming function.

    Tags: ``schatten`` (p in [1, inf]), ``pi`` (either explicit PiWeights or
    power weights ``j**-alpha`` sized to the spectrum), ``weak`` (p > 1),
    ``dixmier``, ``macaev`` (p in [1, inf)).
    """

    tag: str
    p: float | None = None
    alpha: float | None = None
    weights: PiWeights | None = field(default=None, compare=False)

    def __post_init__(self):
        tag, p = self.tag, self.p
        if tag == "schatten":
            if p is None or not p >= 1:
                raise NormKindError(f"schatten needs p in [1, inf], got {p}")
        elif tag == "weak":
            if p is None or not p > 1:
                raise NormKindError(f"weak needs p > 1, got {p}")
        elif tag == "macaev":
            if p is None or not p >= 1 or math.isinf(p):
                raise NormKindError(f"macaev needs p in [1, inf), got {p}")
        elif tag == "pi":
            if self.weights is None and (self.alpha is None or not self.alpha > 0):
                raise NormKindError("pi needs PiWeights or a positive alpha")
        elif tag != "dixmier":
            raise NormKindError(f"unknown norm kind {tag!r}")

    @classmethod
    def schatten(cls, p: float) -> "NormKind":
        return cls("schatten", p=float(p))

    @classmethod
    def operator(cls) -> "NormKind":
        return cls("schatten", p=math.inf)

    @classmethod
    def weak(cls, p: float) -> "NormKind":
        return cls("weak", p=float(p))

    @classmethod
    def dixmier(cls) -> "NormKind":
        return cls("dixmier")

    @classmethod
    def macaev(cls, p: float = 1.0) -> "NormKind":
        return cls("macaev", p=float(p))

    @classmethod
    def pi(cls, weights: PiWeights | None = None, alpha: float | None = None) -> "NormKind":
        return cls("pi", alpha=alpha, weights=weights)

    @classmethod
    def parse(cls, text: str) -> "NormKind":
        """Parse ``operator``, ``dixmier``, ``schatten:2``, ``schatten:inf``,
        ``weak:2``, ``macaev:1`` or ``pi:1`` (power weights, alpha = 1)."""
        text = text.strip().lower()
        if text in ("operator", "op"):
            return cls.operator()
        if text == "dixmier":
            return cls.dixmier()
        tag, sep, arg = text.partition(":")
        if not sep:
            raise NormKindError(f"norm kind {text!r} needs a parameter")
        try:
            val = math.inf if arg in ("inf", "infinity") else float(arg)
        except ValueError:
            raise NormKindError(f"bad parameter in norm kind {text!r}") from None
        if tag == "pi":
            return cls.pi(alpha=val)
        if tag in ("schatten", "weak", "macaev"):
            return cls(tag, p=val)
        raise NormKindError(f"unknown norm kind {text!r}")

    @property
    def label(self) -> str:
        if self.tag == "dixmier":
            return "dixmier"
        if self.tag == "schatten" and math.isinf(self.p):
            return "operator"
        if self.tag == "pi":
            return f"pi:{self.alpha:g}" if self.weights is None else "pi:custom"
        return f"{self.tag}:{self.p:g}"

    def __call__(self, s) -> float:
        """Evaluate on a sequence (not a matrix)."""
        if self.tag == "schatten":
            return schatten_norm(s, self.p)
        if self.tag == "weak":
            return weak_norm(s, self.p)
        if self.tag == "dixmier":
            return dixmier_norm(s)
        if self.tag == "macaev":
            return macaev_norm(s, self.p)
        w = self.weights
        if w is None:
            w = PiWeights.power(self.alpha, max(np.size(s), 1))
        return pi_norm(s, w)


def operator_ideal_norm(M, kind: NormKind) -> float:
    """``phi(s(M))`` for the norming function selected by ``kind``."""
    return kind(singular_values(M))


def ky_fan_dominates(xi, eta) -> bool:
    """True iff every partial sum of ``xi`` is at most that of ``eta``.

    Both inputs are rearranged; the shorter one is zero-padded.
    """
    a = decreasing_rearrangement(xi)
    b = decreasing_rearrangement(eta)
    n = max(a.size, b.size)
    return bool(np.all(np.cumsum(_pad(a, n)) <= np.cumsum(_pad(b, n))))


def projection_criterion(M, kind: NormKind) -> float:
    """``sup_m ||P_m M P_m||`` over leading principal truncations (diagnostic)."""
    M = np.asarray(M)
    return max(operator_ideal_norm(M[:m, :m], kind) for m in range(1, M.shape[0] + 1))


AXIOMS = (
    "positivity",
    "homogeneity",
    "triangle",
    "two_sided_bound",
    "unitary_invariance",
    "adjoint",
    "rank_one",
)


@dataclass
class AxiomReport:
    kind: str
    samples: int
    failures: dict  # axiom -> count
    worst: dict  # axiom -> largest relative violation seen

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())


def check_symmetric_norm_axioms(kinds, samples, rng=None, rtol: float = 1e-9) -> dict:
    """Check the symmetric-norm axioms for each kind on a set of matrices.

    ``samples`` is an array of shape ``(m, n, n)``.  Auxiliary matrices
    (second summands, multipliers, unitaries, scalars, rank-one operators)
    are drawn from ``rng``.  Singular values of every derived matrix are
    computed once and shared by all kinds.  Returns ``{label: AxiomReport}``.
    """
    if isinstance(kinds, NormKind):
        kinds = [kinds]
    X = np.asarray(samples)
    if X.ndim != 3 or X.shape[0] < 1:
        raise ValueError("samples must be a non-empty stack of square matrices")
    m, n, _ = X.shape
    rng = np.random.default_rng(0) if rng is None else rng
    cplx = lambda *shape: rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    Y = np.roll(X, 1, axis=0) if m > 1 else cplx(1, n, n)
    A = cplx(m, n, n)
    B = cplx(m, n, n)
    U = np.stack([random_unitary(n, rng) for _ in range(m)])
    V = np.stack([random_unitary(n, rng) for _ in range(m)])
    alpha = cplx(m) * 2.0
    u = cplx(m, n)
    v = cplx(m, n)
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    beta = cplx(m)
    R1 = beta[:, None, None] * u[:, :, None] * np.conj(v)[:, None, :]

    s_X = singular_values(X)
    s_aX = singular_values(alpha[:, None, None] * X)
    s_XY = singular_values(X + Y)
    s_Y = singular_values(Y)
    s_AXB = singular_values(A @ X @ B)
    s_A = singular_values(A)[:, 0]
    s_B = singular_values(B)[:, 0]
    s_UXV = singular_values(U @ X @ V)
    s_Xh = singular_values(np.conj(np.swapaxes(X, -1, -2)))
    s_R1 = singular_values(R1)

    reports = {}
    for kind in kinds:
        fail = dict.fromkeys(AXIOMS, 0)
        worst = dict.fromkeys(AXIOMS, 0.0)

        def record(name, violation):
            worst[name] = max(worst[name], violation)
            if violation > rtol:
                fail[name] += 1

        for i in range(m):
            nx = kind(s_X[i])
            scale = max(nx, 1e-300)
            record("positivity", 0.0 if nx > 0 else 1.0)
            record("homogeneity", abs(kind(s_aX[i]) - abs(alpha[i]) * nx) / (abs(alpha[i]) * scale))
            lhs, rhs = kind(s_XY[i]), nx + kind(s_Y[i])
            record("triangle", max(lhs - rhs, 0.0) / rhs)
            lhs, rhs = kind(s_AXB[i]), s_A[i] * nx * s_B[i]
            record("two_sided_bound", max(lhs - rhs, 0.0) / rhs)
            record("unitary_invariance", abs(kind(s_UXV[i]) - nx) / scale)
            record("adjoint", abs(kind(s_Xh[i]) - nx) / scale)
            record("rank_one", abs(kind(s_R1[i]) - abs(beta[i])) / abs(beta[i]))
        reports[kind.label] = AxiomReport(kind=kind.label, samples=m, failures=fail, worst=worst)
    return reports
