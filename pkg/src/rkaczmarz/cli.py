"""Command line interface: ``rkaczmarz generate | analyze | solve | experiment``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from rkaczmarz.analysis import analyze
from rkaczmarz.experiment import DEFAULT_ITERS, ExperimentSpec, bound_curve, random_start, run_experiment
from rkaczmarz.formats import TRAJECTORY_COLUMNS, fmt, read_matrix, read_vector, write_csv, write_matrix
from rkaczmarz.generators import EnsembleSpec, gen_noise, generate
from rkaczmarz.linalg import (
    DimensionError,
    RankDeficientError,
    as_vector,
    gram_eigh,
    least_squares_oracle,
    sigma_extremes,
)
from rkaczmarz.sampling import rng_stream
from rkaczmarz.solver import Schedule, SolveConfig, run

PROG = "rkaczmarz"


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # one line on stderr, nonzero exit
        self.exit(2, f"{self.prog}: error: {message}\n")


def _kv(key, value) -> str:
    if isinstance(value, bool):
        return f"{key}={'true' if value else 'false'}"
    if isinstance(value, (int, np.integer)):
        return f"{key}={value}"
    return f"{key}={fmt(value)}"


def cmd_generate(args) -> int:
    spec = EnsembleSpec(args.kind, args.m, args.n, args.seed, args.stream)
    write_matrix(args.out, generate(spec))
    return 0


def cmd_analyze(args) -> int:
    A = read_matrix(args.matrix)
    r = read_vector(args.noise) if args.noise else None
    try:
        report = analyze(A, r)
    except RankDeficientError:
        sig = sigma_extremes(A)
        print(_kv("sigma_min", sig.sigma_min))
        print(_kv("sigma_max", sig.sigma_max))
        print(_kv("rank_deficient", True))
        return 1
    for key, value in report.as_dict().items():
        print(_kv(key, value))
    return 0


def cmd_solve(args) -> int:
    A = read_matrix(args.matrix)
    m, n = A.shape
    is_complex = np.iscomplexobj(A)
    seed = args.seed
    eig = gram_eigh(A)

    if args.homogeneous:
        b = np.zeros(m, dtype=A.dtype)
        x_ref = np.zeros(n, dtype=A.dtype)
    else:
        b = as_vector(read_vector(args.rhs))
        if b.shape != (m,):
            raise DimensionError(f"rhs has length {len(b)}, matrix has {m} rows")
        x_ref = least_squares_oracle(A, b, eig)

    if args.noise:
        r = read_vector(args.noise)
        if r.shape != (m,):
            raise DimensionError(f"noise has length {len(r)}, matrix has {m} rows")
    elif args.noise_norm is not None:
        r = gen_noise(m, args.noise_norm, rng_stream(seed, 1), is_complex and not args.real_noise)
    else:
        r = np.zeros(m, dtype=A.dtype)

    if args.x0:
        x0 = read_vector(args.x0)
    elif args.homogeneous:
        x0 = random_start(n, args.init_norm, rng_stream(seed, 2), is_complex)
    else:
        x0 = np.zeros(n, dtype=A.dtype)

    schedule = Schedule.randomized(A) if args.schedule == "random" else Schedule.cyclic()
    cfg = SolveConfig(args.iters, args.record_every, seed, 3)
    rhs = b + r
    traj = run(A, rhs, x0, schedule, cfg, x_ref)

    report = analyze(A, r, eig)
    init_err = float(np.linalg.norm(x0 - x_ref))
    bound = bound_curve(report.R, report.gamma, init_err, traj.iterations)
    rows = ((1, int(k), e, bd) for k, e, bd in zip(traj.iterations.tolist(), traj.errors.tolist(), bound.tolist()))
    write_csv(args.out, TRAJECTORY_COLUMNS, rows)
    print(_kv("R", report.R))
    print(_kv("gamma", report.gamma))
    print(_kv("threshold", report.threshold))
    print(_kv("final_error", float(np.linalg.norm(traj.final_x - x_ref))))
    return 0


def cmd_experiment(args) -> int:
    spec = ExperimentSpec(
        kind=args.kind,
        m=args.m,
        n=args.n,
        trials=args.trials,
        iters=args.iters,
        record_every=args.record_every,
        noise_norm=args.noise_norm,
        master_seed=args.seed,
        init_norm=args.init_norm,
        complex_noise=not args.real_noise,
    )
    result = run_experiment(spec, workers=args.workers)
    result.write(args.out_dir)
    print(_kv("trials", spec.trials))
    print(_kv("mean_R", result.mean_R))
    print(_kv("mean_threshold", result.mean_threshold))
    print(_kv("pass_fraction", result.pass_fraction()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog=PROG, description="Randomized Kaczmarz solver and noisy-system experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a random test matrix in rkmat format")
    g.add_argument("--kind", required=True, choices=["gaussian", "bernoulli", "fourier"])
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--stream", type=int, default=0, help="stream id under the seed")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="print sigma_min, sigma_max, kappa, R, gamma, threshold")
    a.add_argument("--matrix", required=True)
    a.add_argument("--noise", help="rkvec noise vector r")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("solve", help="run one solve and write its trajectory CSV")
    s.add_argument("--matrix", required=True)
    rhs = s.add_mutually_exclusive_group(required=True)
    rhs.add_argument("--rhs", help="rkvec right-hand side b of a consistent system")
    rhs.add_argument("--homogeneous", action="store_true", help="b = 0, x = 0")
    noise = s.add_mutually_exclusive_group()
    noise.add_argument("--noise", help="rkvec noise vector r added to b")
    noise.add_argument("--noise-norm", type=float, help="draw Gaussian noise of this exact norm")
    s.add_argument("--real-noise", action="store_true", help="real noise even for complex matrices")
    s.add_argument("--x0", help="rkvec starting point")
    s.add_argument("--init-norm", type=float, default=1.0,
                   help="norm of the random start for homogeneous systems (default 1)")
    s.add_argument("--iters", type=int, default=DEFAULT_ITERS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--schedule", choices=["random", "cyclic"], default="random")
    s.add_argument("--record-every", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("experiment", help="multi-trial noisy study; writes summary.csv and trajectories.csv")
    e.add_argument("--kind", required=True, choices=["gaussian", "bernoulli", "fourier"])
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--iters", type=int, default=DEFAULT_ITERS)
    e.add_argument("--record-every", type=int, default=100)
    e.add_argument("--noise-norm", type=float, default=0.02)
    e.add_argument("--real-noise", action="store_true", help="real noise even for complex matrices")
    e.add_argument("--init-norm", type=float, default=1.0)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out-dir", required=True)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
