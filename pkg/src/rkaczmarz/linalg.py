"""Dense real/complex linear algebra used by the solver and the bound computations.

Matrices and vectors are plain numpy arrays: ``float64`` for the real field and
``complex128`` for the complex field.  Matrices are kept C-contiguous so that
``A[i]`` is a row view without a copy.

The inner product is conjugate-linear in the first slot,
``inner(a, x) = sum(conj(a_j) * x_j)``, which is what ``np.vdot`` computes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Jacobi stopping rule: off-diagonal Frobenius norm <= JACOBI_TOL * ||G||_F.
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 30
# sigma_min^2 < RANK_TOL * sigma_max^2 is reported as rank deficient.
RANK_TOL = 1e-13


class DimensionError(ValueError):
    """Operands have incompatible shapes or scalar fields."""


class RankDeficientError(ArithmeticError):
    """The matrix does not have (numerically) full column rank."""


def field_of(arr: np.ndarray) -> str:
    return "complex" if np.iscomplexobj(arr) else "real"


def as_matrix(data) -> np.ndarray:
    """Coerce ``data`` to a C-contiguous 2-D float64 or complex128 array."""
    arr = np.asarray(data)
    dtype = np.complex128 if np.iscomplexobj(arr) else np.float64
    arr = np.ascontiguousarray(arr, dtype=dtype)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    return arr


def as_vector(data) -> np.ndarray:
    arr = np.asarray(data)
    dtype = np.complex128 if np.iscomplexobj(arr) else np.float64
    arr = np.ascontiguousarray(arr, dtype=dtype)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    return arr


def inner(a: np.ndarray, x: np.ndarray):
    """Return ``<a, x> = sum(conj(a_j) x_j)``; a float for real operands."""
    if a.shape != x.shape or a.ndim != 1:
        raise DimensionError(f"inner product of shapes {a.shape} and {x.shape}")
    if field_of(a) != field_of(x):
        raise DimensionError("inner product across real and complex fields")
    value = np.vdot(a, x)
    return complex(value) if np.iscomplexobj(value) else float(value)


def row_norm_sq(A: np.ndarray, i: int) -> float:
    if not 0 <= i < A.shape[0]:
        raise IndexError(f"row {i} out of range for {A.shape[0]} rows")
    row = A[i]
    return float(np.vdot(row, row).real)


def row_norms_sq(A: np.ndarray) -> np.ndarray:
    """All squared row norms at once, O(mn)."""
    if np.iscomplexobj(A):
        return (A.real**2).sum(axis=1) + (A.imag**2).sum(axis=1)
    return (A * A).sum(axis=1)


def frobenius_sq(A: np.ndarray) -> float:
    return float(row_norms_sq(A).sum())


def gram(A: np.ndarray) -> np.ndarray:
    """The n x n Hermitian Gram matrix ``A* A``."""
    G = A.conj().T @ A
    # exact Hermitian symmetry and a real diagonal
    G = 0.5 * (G + G.conj().T)
    return G


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Circle-method tournament: each round is a set of disjoint (p, q) pairs and
    # every pair p < q appears exactly once per sweep.
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for k in range(size // 2):
            p, q = players[k], players[size - 1 - k]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        if ps:
            rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _off_norm(G: np.ndarray) -> float:
    off = G.copy()
    np.fill_diagonal(off, 0)
    return float(np.linalg.norm(off))


def jacobi_eigh(G: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps visit every off-diagonal pair once, in round-robin order so that the
    rotations of one round act on disjoint index pairs and can be applied
    together.  Iteration stops when the off-diagonal Frobenius norm falls to
    ``tol * ||G||_F`` or after ``max_sweeps`` sweeps.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues ascending
    and eigenvectors as the columns of a unitary matrix.
    """
    G = np.array(G, dtype=np.complex128 if np.iscomplexobj(G) else np.float64)
    n = G.shape[0]
    if G.ndim != 2 or G.shape[1] != n:
        raise DimensionError(f"expected a square matrix, got shape {G.shape}")
    V = np.eye(n, dtype=G.dtype)
    scale = float(np.linalg.norm(G))
    target = tol * scale
    sweeps = 0
    while sweeps < max_sweeps and _off_norm(G) > target:
        sweeps += 1
        for P, Q in _round_robin(n):
            a = G[P, P].real
            d = G[Q, Q].real
            b = G[P, Q]
            mag = np.abs(b)
            active = mag > 0
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, b / safe, 1.0)
            theta = (d - a) / (2.0 * safe)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cph = np.conj(phase)

            # G <- G U, then G <- U^H G, with U = diag-phase * rotation on (p, q)
            gp, gq = G[:, P], G[:, Q]
            G[:, P] = gp * c - gq * (s * cph)
            G[:, Q] = gp * s + gq * (c * cph)
            rp, rq = G[P, :], G[Q, :]
            G[P, :] = c[:, None] * rp - (s * phase)[:, None] * rq
            G[Q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
            G[P, Q] = 0
            G[Q, P] = 0

            vp, vq = V[:, P], V[:, Q]
            V[:, P] = vp * c - vq * (s * cph)
            V[:, Q] = vp * s + vq * (c * cph)
    evals = np.diagonal(G).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], V[:, order], sweeps


@dataclass(frozen=True)
class GramEigen:
    """Eigen-decomposition of ``A* A`` for a fixed matrix ``A``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int

    @property
    def rank_deficient(self) -> bool:
        lo, hi = self.eigenvalues[0], self.eigenvalues[-1]
        return bool(hi <= 0 or lo < RANK_TOL * hi)


def gram_eigh(A: np.ndarray) -> GramEigen:
    evals, evecs, sweeps = jacobi_eigh(gram(A))
    return GramEigen(evals, evecs, sweeps)


@dataclass(frozen=True)
class SigmaPair:
    sigma_min: float
    sigma_max: float
    rank_deficient: bool = False

    @property
    def kappa(self) -> float:
        if self.rank_deficient or self.sigma_min == 0:
            return float("inf")
        return self.sigma_max / self.sigma_min


def sigma_extremes(A: np.ndarray, eig: GramEigen | None = None) -> SigmaPair:
    """Smallest and largest singular values of an ``m >= n`` matrix.

    Rank deficiency is flagged on the result instead of raised so callers can
    report it; :func:`require_full_rank` turns it into an exception.
    """
    if A.shape[0] < A.shape[1]:
        raise DimensionError(f"need m >= n, got {A.shape[0]} x {A.shape[1]}")
    if eig is None:
        eig = gram_eigh(A)
    lo = max(float(eig.eigenvalues[0]), 0.0)
    hi = max(float(eig.eigenvalues[-1]), 0.0)
    return SigmaPair(np.sqrt(lo), np.sqrt(hi), eig.rank_deficient)


def require_full_rank(sig: SigmaPair) -> SigmaPair:
    if sig.rank_deficient:
        raise RankDeficientError(
            f"matrix is rank deficient (sigma_min={sig.sigma_min:.3e}, sigma_max={sig.sigma_max:.3e})"
        )
    return sig


def least_squares_oracle(A: np.ndarray, c: np.ndarray, eig: GramEigen | None = None) -> np.ndarray:
    """Minimizer of ``||A v - c||_2`` via ``(A* A)^{-1} A* c``."""
    if c.shape != (A.shape[0],):
        raise DimensionError(f"right-hand side of length {c.shape} for a {A.shape} matrix")
    if eig is None:
        eig = gram_eigh(A)
    if eig.rank_deficient:
        raise RankDeficientError("least squares needs full column rank")
    V, lam = eig.eigenvectors, eig.eigenvalues
    rhs = A.conj().T @ c
    return V @ ((V.conj().T @ rhs) / lam)
