"""Randomized Kaczmarz for consistent and noise-perturbed linear systems."""

from rkaczmarz.analysis import (
    AnalysisReport,
    analyze,
    compute_gamma,
    compute_R,
    noiseless_bound,
    noisy_bound,
    perturbation_diagnostic,
)
from rkaczmarz.linalg import (
    DimensionError,
    RankDeficientError,
    SigmaPair,
    frobenius_sq,
    inner,
    least_squares_oracle,
    row_norm_sq,
    sigma_extremes,
)
from rkaczmarz.sampling import RowSampler, build_sampler, rng_stream
from rkaczmarz.solver import Schedule, SolveConfig, Trajectory, ZeroRowError, project_row, run, run_batch

__version__ = "0.1.0"
