"""Kaczmarz projection step and the cyclic / randomized solve loops.

Each iteration projects the current iterate orthogonally onto the solution
set ``{x : (A x)_i = rhs_i}`` of one row.  With the conjugate-first inner
product that set is ``{x : <a_i, x> = rhs_i}`` for ``a_i = conj(A[i])``, so
the correction is along ``conj(A[i])``; for real matrices this is the row
itself.

Noisy solves are the same loop run with ``rhs = b + r``.  There is no
convergence test: an inconsistent right-hand side leaves the iterates
wandering inside a ball around the solution instead of settling on a point.

Row norms are computed once per solve (an O(mn) pass) and reused.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from rkaczmarz.linalg import DimensionError, row_norms_sq
from rkaczmarz.sampling import RowSampler, build_sampler, rng_stream


class ZeroRowError(ZeroDivisionError):
    """A projection was requested onto the (undefined) hyperplane of a zero row."""


class ConfigurationError(ValueError):
    pass


def project_row(x: np.ndarray, A: np.ndarray, i: int, b_i) -> np.ndarray:
    """Orthogonal projection of ``x`` onto ``{y : (A y)_i = b_i}``."""
    row = A[i]
    if x.shape != row.shape:
        raise DimensionError(f"iterate of length {x.shape} for rows of length {row.shape}")
    norm_sq = float(np.vdot(row, row).real)
    if norm_sq == 0:
        raise ZeroRowError(f"row {i} is zero")
    return x + ((b_i - row @ x) / norm_sq) * row.conj()


@dataclass(frozen=True)
class Schedule:
    kind: str
    sampler: RowSampler | None = None

    def __post_init__(self):
        if self.kind not in ("cyclic", "randomized"):
            raise ConfigurationError(f"unknown schedule {self.kind!r}")
        if self.kind == "randomized" and self.sampler is None:
            raise ConfigurationError("a randomized schedule needs a row sampler")

    @classmethod
    def cyclic(cls) -> Schedule:
        return cls("cyclic")

    @classmethod
    def randomized(cls, A: np.ndarray) -> Schedule:
        """Row-norm-weighted random schedule.  Rejects matrices with zero rows."""
        zero = np.flatnonzero(row_norms_sq(A) == 0)
        if len(zero):
            raise ZeroRowError(f"row {zero[0]} is zero")
        return cls("randomized", build_sampler(A))


@dataclass(frozen=True)
class SolveConfig:
    max_iters: int
    record_every: int = 1
    seed: int = 0
    stream_id: int = 0
    # "error": ||x_k - x_ref||; "residual": ||A x_k - rhs||
    record: str = "error"

    def __post_init__(self):
        if self.max_iters < 0:
            raise ConfigurationError("max_iters must be nonnegative")
        if self.record_every < 1:
            raise ConfigurationError("record_every must be at least 1")
        if self.record not in ("error", "residual"):
            raise ConfigurationError(f"unknown record mode {self.record!r}")


@dataclass
class Trajectory:
    iterations: np.ndarray
    errors: np.ndarray
    final_x: np.ndarray
    rows_visited: int
    rows: np.ndarray = field(repr=False, default=None)

    @property
    def final_error(self) -> float:
        return float(self.errors[-1])


def _row_sequence(m: int, schedule: Schedule, cfg: SolveConfig) -> np.ndarray:
    if schedule.kind == "cyclic":
        return np.arange(cfg.max_iters) % m
    if schedule.sampler.m != m:
        raise ConfigurationError(f"sampler built for {schedule.sampler.m} rows, matrix has {m}")
    return schedule.sampler.draw_many(rng_stream(cfg.seed, cfg.stream_id), cfg.max_iters)


def run(
    A: np.ndarray,
    rhs: np.ndarray,
    x0: np.ndarray,
    schedule: Schedule,
    cfg: SolveConfig,
    x_ref: np.ndarray | None = None,
) -> Trajectory:
    """Apply ``cfg.max_iters`` Kaczmarz projections following ``schedule``.

    The distance to ``x_ref`` (or the residual norm, if ``cfg.record`` says so)
    is recorded at ``k = 0`` and at every multiple of ``cfg.record_every``.
    """
    m, n = A.shape
    if rhs.shape != (m,):
        raise DimensionError(f"right-hand side of length {rhs.shape} for {m} rows")
    if x0.shape != (n,):
        raise DimensionError(f"initial iterate of length {x0.shape} for {n} columns")
    if cfg.record == "error":
        if x_ref is None:
            raise ConfigurationError("error recording needs a reference solution")
        if x_ref.shape != (n,):
            raise DimensionError(f"reference of length {x_ref.shape} for {n} columns")

    dtype = np.result_type(A, rhs, x0, np.float64)
    x = np.array(x0, dtype=dtype)
    norms = row_norms_sq(A)
    directions = A.conj() if np.iscomplexobj(A) else A
    rows = _row_sequence(m, schedule, cfg)

    def measure(v):
        if cfg.record == "residual":
            return float(np.linalg.norm(A @ v - rhs))
        return float(np.linalg.norm(v - x_ref))

    every = cfg.record_every
    iters = [0]
    errors = [measure(x)]
    for k, i in enumerate(rows.tolist(), start=1):
        nrm = norms[i]
        if nrm == 0:
            raise ZeroRowError(f"row {i} is zero")
        x += ((rhs[i] - A[i] @ x) / nrm) * directions[i]
        if k % every == 0:
            iters.append(k)
            errors.append(measure(x))
    return Trajectory(
        iterations=np.array(iters, dtype=np.int64),
        errors=np.array(errors),
        final_x=x,
        rows_visited=len(rows),
        rows=rows,
    )


def run_batch(
    A: np.ndarray,
    rhs: np.ndarray,
    x0: np.ndarray,
    cfg: SolveConfig,
    trials: int,
    x_ref: np.ndarray | None = None,
    schedule: Schedule | None = None,
    workers: int = 1,
) -> list[Trajectory]:
    """Independent randomized solves; trial ``t`` (1-based) uses stream id ``t``.

    Output depends only on the inputs and ``cfg.seed``, never on ``workers``.
    """
    if trials < 1:
        raise ConfigurationError("trials must be at least 1")
    schedule = schedule or Schedule.randomized(A)

    def one(t):
        tcfg = SolveConfig(cfg.max_iters, cfg.record_every, cfg.seed, t, cfg.record)
        return run(A, rhs, x0, schedule, tcfg, x_ref)

    ids = range(1, trials + 1)
    if workers <= 1:
        return [one(t) for t in ids]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, ids))
