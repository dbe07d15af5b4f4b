"""Multi-trial noisy-system experiments.

Each trial draws a fresh matrix and a fresh noise vector, solves the
homogeneous system ``A x = 0`` perturbed to ``A x ~ r`` from a random starting
point of norm ``init_norm``, and records the error ``||x_k||`` next to the
theoretical bound curve.  Trial ``t`` (1-based) draws from four streams of the
master seed::

    stream 4t      matrix
    stream 4t + 1  noise
    stream 4t + 2  starting point
    stream 4t + 3  row selection

so the result is a pure function of the spec, independent of ``workers``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from rkaczmarz.analysis import BoundDomainError, analyze, noisy_bound
from rkaczmarz.formats import SUMMARY_COLUMNS, TRAJECTORY_COLUMNS, write_csv
from rkaczmarz.generators import EnsembleSpec, gen_noise, generate
from rkaczmarz.sampling import rng_stream
from rkaczmarz.solver import Schedule, SolveConfig, run

DEFAULT_ITERS = 6000


def random_start(n: int, norm: float, rng: np.random.Generator, complex_field: bool) -> np.ndarray:
    """Uniformly random direction scaled to ``norm``."""
    return gen_noise(n, norm, rng, complex_field)


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    m: int
    n: int
    trials: int = 100
    iters: int = DEFAULT_ITERS
    record_every: int = 100
    noise_norm: float = 0.02
    master_seed: int = 0
    init_norm: float = 1.0
    # partial Fourier systems get complex noise unless this is False
    complex_noise: bool = True

    def __post_init__(self):
        if self.trials < 1 or self.iters < 1 or self.record_every < 1:
            raise ValueError("trials, iters and record_every must be positive")
        if self.noise_norm < 0 or self.init_norm < 0:
            raise ValueError("noise_norm and init_norm must be nonnegative")
        # validates kind and dimensions
        self.ensemble(1)

    def ensemble(self, trial: int) -> EnsembleSpec:
        return EnsembleSpec(self.kind, self.m, self.n, self.master_seed, 4 * trial)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    R: float
    gamma: float
    threshold: float
    final_error: float
    iterations: np.ndarray
    errors: np.ndarray
    bound: np.ndarray


def run_trial(spec: ExperimentSpec, trial: int) -> TrialRecord:
    ens = spec.ensemble(trial)
    A = generate(ens)
    is_complex = np.iscomplexobj(A)
    seed, base = spec.master_seed, 4 * trial
    r = gen_noise(spec.m, spec.noise_norm, rng_stream(seed, base + 1), is_complex and spec.complex_noise)
    x0 = random_start(spec.n, spec.init_norm, rng_stream(seed, base + 2), is_complex)
    report = analyze(A, r)
    x_true = np.zeros(spec.n, dtype=A.dtype)
    cfg = SolveConfig(spec.iters, spec.record_every, seed, base + 3)
    traj = run(A, r, x0, Schedule.randomized(A), cfg, x_true)
    bound = bound_curve(report.R, report.gamma, spec.init_norm, traj.iterations)
    final_error = float(np.linalg.norm(traj.final_x - x_true))
    return TrialRecord(
        trial, report.R, report.gamma, report.threshold, final_error,
        traj.iterations, traj.errors, bound,
    )


def bound_curve(R: float, gamma: float, init_err: float, iterations: np.ndarray) -> np.ndarray:
    """``noisy_bound`` over ``iterations``; NaN where R <= 1 (single-column systems)."""
    try:
        return np.atleast_1d(noisy_bound(R, gamma, init_err, iterations))
    except BoundDomainError:
        return np.full(len(iterations), np.nan)


def _trial_job(args):
    return run_trial(*args)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    trials: list[TrialRecord]

    @property
    def mean_R(self) -> float:
        return float(np.mean([t.R for t in self.trials]))

    @property
    def mean_threshold(self) -> float:
        return float(np.mean([t.threshold for t in self.trials]))

    def pass_fraction(self, slack: float = 0.0) -> float:
        """Fraction of trials whose final error is within ``threshold * (1 + slack)``."""
        ok = [t.final_error <= t.threshold * (1.0 + slack) for t in self.trials]
        return float(np.mean(ok))

    def summary_rows(self):
        for t in self.trials:
            yield (t.trial, t.R, t.gamma, t.threshold, t.final_error)

    def trajectory_rows(self):
        for t in self.trials:
            for k, e, b in zip(t.iterations.tolist(), t.errors.tolist(), t.bound.tolist()):
                yield (t.trial, int(k), e, b)

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        summary, trajectories = out / "summary.csv", out / "trajectories.csv"
        try:
            write_csv(summary, SUMMARY_COLUMNS, self.summary_rows())
            write_csv(trajectories, TRAJECTORY_COLUMNS, self.trajectory_rows())
        except BaseException:
            # never leave a summary without its trajectories
            summary.unlink(missing_ok=True)
            raise
        return summary, trajectories


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    jobs = [(spec, t) for t in range(1, spec.trials + 1)]
    if workers <= 1:
        records = [run_trial(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_trial_job, jobs))
    return ExperimentResult(spec, records)
