"""Seeded random streams and the alias-method row sampler.

Every random quantity in the package comes from :func:`rng_stream`.  A stream
is a numpy ``Generator`` driven by the counter-based Philox4x64-10 bit
generator, keyed through ``SeedSequence(seed, spawn_key=(stream_id,))``.  Equal
``(seed, stream_id)`` pairs give identical sequences; distinct stream ids from
one seed give independent streams.  Uniform floats come from
``Generator.random`` (53-bit resolution on [0, 1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rkaczmarz.linalg import row_norms_sq

_U64 = 2**64


def rng_stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    if not (0 <= seed < _U64 and 0 <= stream_id < _U64):
        raise ValueError("seed and stream id must be unsigned 64-bit integers")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.Philox(ss))


class DegenerateWeightsError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RowSampler:
    """Walker/Vose alias table over row indices ``0..m-1``.

    A draw picks a cell uniformly, then keeps it with probability ``prob[j]``
    or moves to ``alias[j]``.
    """

    weights: np.ndarray
    prob: np.ndarray
    alias: np.ndarray

    @property
    def m(self) -> int:
        return len(self.weights)

    @classmethod
    def from_weights(cls, weights) -> RowSampler:
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or len(w) == 0:
            raise DegenerateWeightsError("need a non-empty 1-D weight vector")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DegenerateWeightsError("weights must be finite and nonnegative")
        total = w.sum()
        if total <= 0:
            raise DegenerateWeightsError("all weights are zero")
        p = w / total
        m = len(p)
        prob = np.zeros(m)
        alias = np.arange(m)
        scaled = (p * m).tolist()
        small = [i for i, v in enumerate(scaled) if v < 1.0]
        large = [i for i, v in enumerate(scaled) if v >= 1.0]
        while small and large:
            s = small.pop()
            g = large.pop()
            prob[s] = scaled[s]
            alias[s] = g
            scaled[g] = (scaled[g] + scaled[s]) - 1.0
            (small if scaled[g] < 1.0 else large).append(g)
        # leftovers are 1 up to rounding; a zero-weight leftover must stay unreachable
        fallback = int(np.argmax(p))
        for i in large + small:
            if p[i] > 0:
                prob[i] = 1.0
            else:
                prob[i] = 0.0
                alias[i] = fallback
        return cls(p, prob, alias)

    def table_probabilities(self) -> np.ndarray:
        """Selection probabilities implied by the table itself."""
        m = self.m
        out = self.prob.copy()
        np.add.at(out, self.alias, 1.0 - self.prob)
        return out / m

    def draw_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        cells = rng.integers(0, self.m, size=size)
        coins = rng.random(size)
        return np.where(coins < self.prob[cells], cells, self.alias[cells])

    def draw(self, rng: np.random.Generator) -> int:
        return int(self.draw_many(rng, 1)[0])


def build_sampler(A: np.ndarray) -> RowSampler:
    """Sampler choosing row ``i`` with probability ``||a_i||^2 / ||A||_F^2``.

    Zero rows are allowed here and get probability zero.
    """
    return RowSampler.from_weights(row_norms_sq(A))


def draw(sampler: RowSampler, rng: np.random.Generator) -> int:
    return sampler.draw(rng)
