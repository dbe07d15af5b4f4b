"""Convergence quantities for randomized Kaczmarz.

``R = ||A^{-1}||^2 ||A||_F^2`` with ``||A^{-1}|| = 1 / sigma_min`` sets the
expected per-step contraction ``1 - 1/R`` of the squared error.  With noise
``r`` on the right-hand side the iterates approach ``x`` only up to the
threshold ``sqrt(R) * gamma`` where ``gamma = max_i |r_i| / ||a_i||``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rkaczmarz.linalg import (
    DimensionError,
    GramEigen,
    frobenius_sq,
    gram_eigh,
    least_squares_oracle,
    require_full_rank,
    row_norms_sq,
    sigma_extremes,
)


class BoundDomainError(ValueError):
    """Bound requested for R <= 1, where 1 - 1/R is not a contraction factor."""


@dataclass(frozen=True)
class AnalysisReport:
    sigma_min: float
    sigma_max: float
    kappa: float
    R: float
    gamma: float
    threshold: float
    frobenius_sq: float

    def as_dict(self) -> dict[str, float]:
        return {
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "kappa": self.kappa,
            "R": self.R,
            "gamma": self.gamma,
            "threshold": self.threshold,
        }


def compute_R(A: np.ndarray, eig: GramEigen | None = None) -> float:
    sig = require_full_rank(sigma_extremes(A, eig))
    return float(frobenius_sq(A) / sig.sigma_min**2)


def compute_gamma(A: np.ndarray, r: np.ndarray) -> float:
    """Largest noise-to-row-norm ratio ``max_i |r_i| / ||a_i||``."""
    if r.shape != (A.shape[0],):
        raise DimensionError(f"noise of length {r.shape} for {A.shape[0]} rows")
    norms = np.sqrt(row_norms_sq(A))
    mag = np.abs(r)
    zero = norms == 0
    if np.any(zero & (mag != 0)):
        raise ZeroDivisionError("nonzero noise on a zero row makes gamma undefined")
    if not np.any(~zero):
        return 0.0
    return float(np.max(mag[~zero] / norms[~zero]))


def _check_R(R: float):
    if not R > 1:
        raise BoundDomainError(f"rate bound needs R > 1, got R={R}")


def noiseless_bound(R: float, init_err_sq: float, k):
    """Bound on the expected squared error: ``(1 - 1/R)^k * init_err_sq``."""
    _check_R(R)
    out = (1.0 - 1.0 / R) ** np.asarray(k, dtype=np.float64) * init_err_sq
    return float(out) if np.ndim(out) == 0 else out


def noisy_bound(R: float, gamma: float, init_err: float, k):
    """Bound on the expected error of the noisy method after ``k`` steps.

    ``init_err`` is ``||x_0 - x||``: the transient term decays from the
    distance of the starting point to the true solution.
    """
    _check_R(R)
    if gamma < 0 or init_err < 0:
        raise ValueError("gamma and init_err must be nonnegative")
    k = np.asarray(k, dtype=np.float64)
    out = (1.0 - 1.0 / R) ** (k / 2.0) * init_err + np.sqrt(R) * gamma
    return float(out) if np.ndim(out) == 0 else out


def analyze(A: np.ndarray, r: np.ndarray | None = None, eig: GramEigen | None = None) -> AnalysisReport:
    """All bound ingredients for ``A`` and optional noise ``r``.

    Raises :class:`~rkaczmarz.linalg.RankDeficientError` when ``A`` lacks full
    column rank.
    """
    sig = require_full_rank(sigma_extremes(A, eig))
    fro = frobenius_sq(A)
    R = fro / sig.sigma_min**2
    gamma = 0.0 if r is None else compute_gamma(A, r)
    return AnalysisReport(
        sigma_min=float(sig.sigma_min),
        sigma_max=float(sig.sigma_max),
        kappa=float(sig.kappa),
        R=float(R),
        gamma=gamma,
        threshold=float(np.sqrt(R) * gamma),
        frobenius_sq=fro,
    )


def perturbation_diagnostic(A: np.ndarray, r: np.ndarray, x: np.ndarray) -> tuple[float, float, float]:
    """Compare the least-squares error under noise with two a priori bounds.

    Returns ``(lhs, rhs_classical, rhs_kaczmarz)`` where ``lhs`` is
    ``||x - x_hat|| / ||x||`` for ``x_hat`` the least-squares solution with
    data ``A x + r``; ``rhs_classical = kappa ||r|| / ||A x||`` and
    ``rhs_kaczmarz = kappa * max_i sqrt(n) |r_i| / (||a_i|| ||x||)``.
    """
    x_norm = float(np.linalg.norm(x))
    if x_norm == 0:
        raise ValueError("the diagnostic is relative to ||x|| and needs x != 0")
    if not np.any(r):
        return 0.0, 0.0, 0.0
    eig = gram_eigh(A)
    sig = require_full_rank(sigma_extremes(A, eig))
    b = A @ x
    x_hat = least_squares_oracle(A, b + r, eig)
    lhs = float(np.linalg.norm(x - x_hat)) / x_norm
    rhs_classical = sig.kappa * float(np.linalg.norm(r)) / float(np.linalg.norm(b))
    n = A.shape[1]
    rhs_kaczmarz = sig.kappa * np.sqrt(n) * compute_gamma(A, r) / x_norm
    return lhs, rhs_classical, float(rhs_kaczmarz)
