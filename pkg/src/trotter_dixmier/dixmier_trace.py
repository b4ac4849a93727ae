"""Partial-sum sequences, the Horn-Ky Fan inequalities, dilations, and a
limit-consistent Dixmier-trace estimator.

An invariant mean on bounded sequences cannot be constructed, but any
admissible one agrees with the ordinary limit on convergent sequences.  The
estimator therefore averages ``T_n = sigma_n / (1 + ln n)`` over a trailing
window and flags the result as converged only when ``T_n`` is flat there (in
``ln n``).  For non-convergent tails it reports the window range instead of
a value.

Partial sums use ``np.cumsum``, a sequential left-to-right reduction, so the
result is reproducible to the bit for a given spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .ideal_norms import decreasing_rearrangement
from .spectral_core import eig_hermitian, singular_values

DEFAULT_WINDOW = 0.5
DEFAULT_SLOPE_TOL = 0.02
MIN_WINDOW_POINTS = 8
MIN_LENGTH = 16


@dataclass(frozen=True)
class TraceSequence:
    sigma: np.ndarray
    tee: np.ndarray

    @property
    def length(self) -> int:
        return self.sigma.size


@dataclass(frozen=True)
class TraceEstimate:
    value: float | None  # None when the tail has not settled
    window: tuple[int, int]
    slope: float
    converged: bool
    window_min: float
    window_max: float


def _spectrum(s) -> np.ndarray:
    s = np.asarray(s)
    if s.ndim == 2:
        return singular_values(s)
    x = s.astype(float)
    if np.any(x < 0) or np.any(np.diff(x) > 0):
        x = decreasing_rearrangement(x)
    return x


def trace_sequence(s) -> TraceSequence:
    """``sigma_n`` and ``T_n`` for a spectrum (or a matrix, via its singular values)."""
    x = _spectrum(s)
    sigma = np.cumsum(x)
    n = np.arange(1, x.size + 1, dtype=float)
    return TraceSequence(sigma=sigma, tee=sigma / (1.0 + np.log(n)))


def estimate_dixmier_trace(s, window_fraction: float = DEFAULT_WINDOW,
                           slope_tol: float = DEFAULT_SLOPE_TOL) -> TraceEstimate:
    """Trailing-window mean of ``T_n`` with a flatness test.

    The window is ``[ceil((1 - window_fraction) N), N]`` (1-based).  The slope
    is the least-squares slope of ``T_n`` against ``ln n`` over the window.
    """
    if not 0 < window_fraction < 1:
        raise ValueError("window_fraction must lie in (0, 1)")
    seq = trace_sequence(s)
    N = seq.length
    if N < MIN_LENGTH:
        raise ValueError(f"need at least {MIN_LENGTH} terms, got {N}")
    lo = max(1, math.ceil((1.0 - window_fraction) * N))
    if N - lo + 1 < MIN_WINDOW_POINTS:
        raise ValueError(f"window [{lo}, {N}] has fewer than {MIN_WINDOW_POINTS} points")
    tail = seq.tee[lo - 1:]
    logn = np.log(np.arange(lo, N + 1, dtype=float))
    slope = float(np.polyfit(logn, tail, 1)[0])
    converged = abs(slope) <= slope_tol
    return TraceEstimate(
        value=float(np.mean(tail)) if converged else None,
        window=(lo, N),
        slope=slope,
        converged=converged,
        window_min=float(np.min(tail)),
        window_max=float(np.max(tail)),
    )


def dilation(seq, k: int = 2) -> np.ndarray:
    """Repeat every entry ``k`` times: ``(a, b, ...) -> (a, .., a, b, .., b, ...)``."""
    if k < 1:
        raise ValueError("dilation factor must be >= 1")
    return np.repeat(np.asarray(seq, dtype=float), k)


def dilation_d2(seq) -> np.ndarray:
    return dilation(seq, 2)


def window_mean(seq, window_fraction: float = DEFAULT_WINDOW) -> float:
    """Mean over the trailing window of an arbitrary bounded sequence."""
    x = np.asarray(seq, dtype=float)
    lo = max(1, math.ceil((1.0 - window_fraction) * x.size))
    return float(np.mean(x[lo - 1:]))


def telescoping_differences(s) -> np.ndarray:
    """``T_{2n} - T_{2n-1}`` for ``n = 1, 2, ...`` while ``2n <= N``."""
    tee = trace_sequence(s).tee
    m = tee.size // 2
    return tee[1:2 * m:2] - tee[0:2 * m:2]


def _psd_eigenvalues(X, name: str) -> np.ndarray:
    w = eig_hermitian(X).eigenvalues
    if w[0] < -1e-12 * max(1.0, abs(w[-1])):
        raise ValueError(f"{name} is not positive semi-definite (eigenvalue {w[0]:.3e})")
    return np.clip(w[::-1], 0.0, None)


def variational_sigma(X, n: int) -> float:
    """``max Tr(X P)`` over rank-``n`` orthogonal projections ``P``.

    The maximiser projects onto the top-``n`` eigenvectors; the value is
    evaluated as an actual trace against that projection.
    """
    es = eig_hermitian(X)
    dim = es.dim
    if not 1 <= n <= dim:
        raise ValueError(f"n must lie in [1, {dim}], got {n}")
    if es.eigenvalues[0] < -1e-12 * max(1.0, abs(es.eigenvalues[-1])):
        raise ValueError("X is not positive semi-definite")
    Vn = es.basis[:, dim - n:]
    P = Vn @ np.conj(Vn.T)
    return float(np.real(np.trace(np.asarray(X) @ P)))


@dataclass
class HornKyFanReport:
    sub_violation: float  # max of sigma_n(X+Y) - sigma_n(X) - sigma_n(Y)
    super_violation: float  # max of sigma_n(X) + sigma_n(Y) - sigma_2n(X+Y)
    tol: float

    @property
    def passed(self) -> bool:
        return self.sub_violation <= self.tol and self.super_violation <= self.tol


def horn_ky_fan_check(X, Y, tol: float = 1e-10) -> HornKyFanReport:
    """Subadditivity of ``sigma_n`` and ``sigma_2n(X+Y) >= sigma_n(X) + sigma_n(Y)``."""
    x = _psd_eigenvalues(X, "X")
    y = _psd_eigenvalues(Y, "Y")
    xy = _psd_eigenvalues(np.asarray(X) + np.asarray(Y), "X + Y")
    sx, sy, sxy = np.cumsum(x), np.cumsum(y), np.cumsum(xy)
    scale = max(1.0, sxy[-1])
    sub = float(np.max(sxy - sx - sy)) / scale
    half = xy.size // 2
    sup = float(np.max(sx[:half] + sy[:half] - sxy[1:2 * half:2])) / scale if half else -np.inf
    return HornKyFanReport(sub_violation=max(sub, 0.0), super_violation=max(sup, 0.0), tol=tol)


def make_model_spectrum(kind: str, N: int, *, c: float = 1.0, t: float = 1.0,
                        r: float = 0.5) -> np.ndarray:
    """Model spectra with prescribed asymptotics.

    ``harmonic``: ``c / j``; ``log_semigroup``: ``j**-t`` (the spectrum of
    ``exp(-t C)`` for ``C = diag(ln j)``); ``trace_class``: ``r**j``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    j = np.arange(1, N + 1, dtype=float)
    if kind == "harmonic":
        if not c > 0:
            raise ValueError("harmonic model needs c > 0")
        return c / j
    if kind == "log_semigroup":
        if not t > 0:
            raise ValueError("log_semigroup model needs t > 0")
        return j ** -t
    if kind == "trace_class":
        if not 0 < r < 1:
            raise ValueError("trace_class model needs 0 < r < 1")
        return r ** j
    raise ValueError(f"unknown model spectrum {kind!r}")
