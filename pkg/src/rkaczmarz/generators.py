"""Seeded generators for the three test ensembles and for fixed-norm noise.

Gaussian entries use numpy's ziggurat sampler (``Generator.standard_normal``).
Sampling points for the partial Fourier ensemble are drawn on [0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rkaczmarz.sampling import rng_stream

KINDS = ("gaussian", "bernoulli01", "partial_fourier")
# command-line spellings
KIND_ALIASES = {"gaussian": "gaussian", "bernoulli": "bernoulli01", "fourier": "partial_fourier"}


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    m: int
    n: int
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        kind = KIND_ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.n < 1 or self.m < self.n:
            raise ValueError(f"need m >= n >= 1, got m={self.m}, n={self.n}")
        if kind == "partial_fourier" and self.n % 2 == 0:
            raise ValueError(f"partial Fourier needs odd n, got n={self.n}")

    def rng(self) -> np.random.Generator:
        return rng_stream(self.seed, self.stream_id)


def _check(spec: EnsembleSpec, kind: str):
    if spec.kind != kind:
        raise ValueError(f"expected a {kind} spec, got {spec.kind}")


def gen_gaussian(spec: EnsembleSpec) -> np.ndarray:
    """i.i.d. N(0, 1) entries."""
    _check(spec, "gaussian")
    return spec.rng().standard_normal((spec.m, spec.n))


def gen_bernoulli01(spec: EnsembleSpec) -> np.ndarray:
    """Entries 0 or 1, each with probability 1/2."""
    _check(spec, "bernoulli01")
    return spec.rng().integers(0, 2, size=(spec.m, spec.n)).astype(np.float64)


def gen_partial_fourier(spec: EnsembleSpec) -> np.ndarray:
    """Rows ``exp(2 pi i k t_j)`` for ``k = -(n-1)/2 .. (n-1)/2`` ascending.

    The sample points ``t_j`` are i.i.d. uniform, so rows are a nonuniform
    sampling of the trigonometric basis.
    """
    _check(spec, "partial_fourier")
    t = spec.rng().random(spec.m)
    half = (spec.n - 1) // 2
    freqs = np.arange(-half, half + 1)
    return np.exp(2j * np.pi * np.outer(t, freqs))


def generate(spec: EnsembleSpec) -> np.ndarray:
    return {
        "gaussian": gen_gaussian,
        "bernoulli01": gen_bernoulli01,
        "partial_fourier": gen_partial_fourier,
    }[spec.kind](spec)


def gen_noise(m: int, norm: float, rng: np.random.Generator, complex_field: bool = False) -> np.ndarray:
    """Gaussian direction rescaled to Euclidean norm exactly ``norm``.

    Complex noise has i.i.d. real and imaginary parts.
    """
    if norm < 0:
        raise ValueError("noise norm must be nonnegative")
    dtype = np.complex128 if complex_field else np.float64
    if norm == 0:
        return np.zeros(m, dtype=dtype)
    while True:
        if complex_field:
            v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        else:
            v = rng.standard_normal(m)
        length = np.linalg.norm(v)
        if length > 0:
            return v * (norm / length)
