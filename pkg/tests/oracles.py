"""Independent reference computations used to freeze expected values."""

from fractions import Fraction

import numpy as np


def exact_gram(A):
    F = [[Fraction(float(v)) for v in row] for row in np.asarray(A, dtype=float)]
    m, n = len(F), len(F[0])
    return [[sum(F[i][j] * F[i][k] for i in range(m)) for k in range(n)] for j in range(n)]


def count_below(G, lam):
    """Number of eigenvalues of symmetric ``G`` below ``lam``.

    Signs of the ratios of consecutive leading principal minors of
    ``G - lam I``, each evaluated exactly by fraction-valued elimination.
    """
    n = len(G)
    M = [[G[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    neg = 0
    for k in range(n):
        piv = M[k][k]
        if piv == 0:
            raise ZeroDivisionError("bisection hit a principal-minor root")
        if piv < 0:
            neg += 1
        for i in range(k + 1, n):
            f = M[i][k] / piv
            for j in range(k + 1, n):
                M[i][j] -= f * M[k][j]
    return neg


def _bisect(G, index):
    # smallest lam with count_below(lam) > index
    lo, hi = 0.0, float(sum(G[i][i] for i in range(len(G)))) * 1.0000001
    while True:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            return hi
        if count_below(G, Fraction(mid)) > index:
            hi = mid
        else:
            lo = mid


def sigma_extremes_oracle(A):
    G = exact_gram(A)
    n = len(G)
    return np.sqrt(_bisect(G, 0)), np.sqrt(_bisect(G, n - 1))
