"""Dense Hermitian linear algebra used by every other module.

The eigensolver is a cyclic Jacobi method with a round-robin (parallel)
pair ordering: each step rotates ``n/2`` disjoint index pairs at once, so a
sweep is ``n - 1`` vectorised steps.  Stacked input of shape ``(..., n, n)``
is supported; members that have converged are frozen, so each member's
result does not depend on what it was batched with.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

MAX_DIM = 512
HERMITIAN_RTOL = 1e-12
JACOBI_TOL = 1e-13
MAX_SWEEPS = 60
PSD_CLAMP = 1e-12


class SymmetryError(ValueError):
    """Input is not Hermitian within tolerance."""


class SpectralDomainError(ValueError):
    """Spectral function requested on a matrix with negative spectrum."""


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray  # ascending, shape (..., n)
    basis: np.ndarray  # unitary, columns are eigenvectors

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[-1]

    def reconstruct(self) -> np.ndarray:
        U = self.basis
        return (U * self.eigenvalues[..., None, :]) @ np.conj(np.swapaxes(U, -1, -2))


def _as_square(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise ValueError(f"expected square matrix, got shape {M.shape}")
    if M.shape[-1] < 1:
        raise ValueError("dimension must be >= 1")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    if not np.iscomplexobj(M):
        M = M.astype(float)
    return M


def hermitian_defect(M) -> float:
    """Largest |M - M^*| entry relative to the largest |M| entry."""
    M = np.asarray(M)
    scale = np.max(np.abs(M)) if M.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(M - np.conj(np.swapaxes(M, -1, -2)))) / scale)


def is_hermitian(M, rtol: float = HERMITIAN_RTOL) -> bool:
    return hermitian_defect(M) <= rtol


def as_hermitian(M, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate and exactly symmetrise ``M``; raise SymmetryError otherwise."""
    M = _as_square(M)
    if M.shape[-1] > MAX_DIM:
        raise ValueError(f"dimension {M.shape[-1]} exceeds cap {MAX_DIM}")
    defect = hermitian_defect(M)
    if defect > rtol:
        raise SymmetryError(f"matrix is not Hermitian: relative defect {defect:.3e} > {rtol:.0e}")
    return 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings for one cyclic sweep; every pair (p, q), p < q, appears once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        P, Q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                P.append(min(a, b))
                Q.append(max(a, b))
        rounds.append((np.array(P, dtype=int), np.array(Q, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _offdiag_norm(A: np.ndarray) -> np.ndarray:
    n = A.shape[-1]
    off = A.copy()
    idx = np.arange(n)
    off[..., idx, idx] = 0
    return np.sqrt(np.sum(np.abs(off) ** 2, axis=(-2, -1)))


def _jacobi(A: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    A = A.copy()
    batch = A.shape[:-2]
    n = A.shape[-1]
    V = np.broadcast_to(np.eye(n, dtype=A.dtype), A.shape).copy()
    if n == 1:
        return np.real(A[..., 0, :]).copy(), V
    scale = np.sqrt(np.sum(np.abs(A) ** 2, axis=(-2, -1)))
    threshold = tol * scale
    rounds = _round_robin(n)
    active = _offdiag_norm(A) > threshold
    sweeps = 0
    while np.any(active):
        if sweeps >= MAX_SWEEPS:
            raise RuntimeError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
        for P, Q in rounds:
            app = np.real(A[..., P, P])
            aqq = np.real(A[..., Q, Q])
            apq = A[..., P, Q]
            r = np.abs(apq)
            live = (r > 0) & active[..., None]
            r_safe = np.where(live, r, 1.0)
            phase = np.where(live, apq / r_safe, 1.0)
            tau = (aqq - app) / (2.0 * r_safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
            u00, u01 = c, s
            u10, u11 = -s * np.conj(phase), c * np.conj(phase)
            Ap = A[..., :, P].copy()
            Aq = A[..., :, Q]
            A[..., :, P] = Ap * u00[..., None, :] + Aq * u10[..., None, :]
            A[..., :, Q] = Ap * u01[..., None, :] + Aq * u11[..., None, :]
            Ap = A[..., P, :].copy()
            Aq = A[..., Q, :]
            A[..., P, :] = np.conj(u00)[..., :, None] * Ap + np.conj(u10)[..., :, None] * Aq
            A[..., Q, :] = np.conj(u01)[..., :, None] * Ap + np.conj(u11)[..., :, None] * Aq
            newp = np.where(live, app - t * r, app)
            newq = np.where(live, aqq + t * r, aqq)
            A[..., P, P] = newp
            A[..., Q, Q] = newq
            A[..., P, Q] = np.where(live, 0, A[..., P, Q])
            A[..., Q, P] = np.where(live, 0, A[..., Q, P])
            Vp = V[..., :, P].copy()
            Vq = V[..., :, Q]
            V[..., :, P] = Vp * u00[..., None, :] + Vq * u10[..., None, :]
            V[..., :, Q] = Vp * u01[..., None, :] + Vq * u11[..., None, :]
        sweeps += 1
        active = active & (_offdiag_norm(A) > threshold)
    idx = np.arange(n)
    return np.real(A[..., idx, idx]).copy(), V


def eig_hermitian(M, tol: float = JACOBI_TOL) -> EigenSystem:
    """Eigen-decomposition of a Hermitian (or stack of Hermitian) matrix.

    Eigenvalues are returned ascending with the matching unitary basis.
    Raises SymmetryError when ``M`` is not Hermitian within 1e-12 relative.
    """
    H = as_hermitian(M)
    w, V = _jacobi(H, tol)
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    V = np.take_along_axis(V, order[..., None, :], axis=-1)
    return EigenSystem(eigenvalues=w, basis=V)


def eigvals_hermitian(M, tol: float = JACOBI_TOL) -> np.ndarray:
    return eig_hermitian(M, tol).eigenvalues


def _one_sided_jacobi(M: np.ndarray, tol: float) -> np.ndarray:
    """Column norms after Hestenes orthogonalisation (``rows >= cols``)."""
    A = M.copy()
    n = A.shape[-1]
    if n == 1:
        return np.sqrt(np.sum(np.abs(A) ** 2, axis=-2))
    rounds = _round_robin(n)
    active = np.ones(A.shape[:-2], dtype=bool)
    for _ in range(MAX_SWEEPS):
        worst = np.zeros(A.shape[:-2])
        for P, Q in rounds:
            Ap = A[..., :, P]
            Aq = A[..., :, Q]
            alpha = np.sum(np.abs(Ap) ** 2, axis=-2)
            beta = np.sum(np.abs(Aq) ** 2, axis=-2)
            gamma = np.sum(np.conj(Ap) * Aq, axis=-2)
            r = np.abs(gamma)
            denom = np.sqrt(alpha * beta)
            cosine = np.where(denom > 0, r / np.where(denom > 0, denom, 1.0), 0.0)
            worst = np.maximum(worst, np.max(cosine, axis=-1))
            live = (cosine > tol) & active[..., None]
            r_safe = np.where(live, r, 1.0)
            phase = np.where(live, gamma / r_safe, 1.0)
            tau = (beta - alpha) / (2.0 * r_safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            u10, u11 = -s * np.conj(phase), c * np.conj(phase)
            A[..., :, P] = Ap * c[..., None, :] + Aq * u10[..., None, :]
            A[..., :, Q] = Ap * s[..., None, :] + Aq * u11[..., None, :]
        active = active & (worst > tol)
        if not np.any(active):
            return np.sqrt(np.sum(np.abs(A) ** 2, axis=-2))
    raise RuntimeError(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps")


def singular_values(M) -> np.ndarray:
    """Non-increasing singular values, counted with multiplicity.

    Hermitian input uses sorted absolute eigenvalues.  General (possibly
    rectangular) input uses one-sided Jacobi: columns are rotated pairwise
    until mutually orthogonal, and the singular values are the column norms.
    """
    M = np.asarray(M)
    if M.ndim < 2:
        raise ValueError(f"expected matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    if not np.iscomplexobj(M):
        M = M.astype(float)
    rows, cols = M.shape[-2:]
    if rows == cols and is_hermitian(M):
        w = np.abs(eigvals_hermitian(M))
        return -np.sort(-w, axis=-1)
    if rows < cols:
        M = np.conj(np.swapaxes(M, -1, -2))
    s = _one_sided_jacobi(M, JACOBI_TOL)
    return -np.sort(-s, axis=-1)


def operator_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0 or not np.any(M):
        return 0.0
    return float(singular_values(M)[..., 0])


ScalarFunction = Callable[[np.ndarray], np.ndarray]


def _psd_eigensystem(M: Union[np.ndarray, EigenSystem]) -> EigenSystem:
    es = M if isinstance(M, EigenSystem) else eig_hermitian(M)
    w = es.eigenvalues
    if np.any(w < -PSD_CLAMP):
        bad = float(np.min(w))
        raise SpectralDomainError(f"matrix is not positive semi-definite: eigenvalue {bad:.6e}")
    return EigenSystem(eigenvalues=np.where(w < 0, 0.0, w), basis=es.basis)


def apply_spectral_function(h: ScalarFunction, M, scale: float = 1.0) -> np.ndarray:
    """Return ``h(scale * M)`` for positive semi-definite ``M``.

    ``M`` may be a matrix or a precomputed :class:`EigenSystem`; the latter
    avoids repeated eigensolves when the same operator is evaluated at many
    scales.  Eigenvalues in ``[-1e-12, 0)`` are clamped to zero.
    """
    if scale < 0:
        raise ValueError("scale must be non-negative")
    es = _psd_eigensystem(M)
    vals = np.asarray(h(scale * es.eigenvalues), dtype=float)
    U = es.basis
    out = (U * vals[..., None, :]) @ np.conj(np.swapaxes(U, -1, -2))
    return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))


def psd_eigensystem(M) -> EigenSystem:
    """Eigensystem of a PSD matrix with the small-negative clamp applied."""
    return _psd_eigensystem(M)


def random_hermitian(n: int, rng: np.random.Generator, complex_: bool = True) -> np.ndarray:
    G = rng.standard_normal((n, n))
    if complex_:
        G = G + 1j * rng.standard_normal((n, n))
    return 0.5 * (G + np.conj(G.T))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_psd(n: int, rng: np.random.Generator, complex_: bool = True) -> np.ndarray:
    G = rng.standard_normal((n, n))
    if complex_:
        G = G + 1j * rng.standard_normal((n, n))
    X = np.conj(G.T) @ G
    return 0.5 * (X + np.conj(X.T))
