"""Sampling from the Linial-Meshulam model Y(n, p).

Draw order is pinned: the C(n, 3) triples are visited in lexicographic order
and each consumes exactly one uniform double from a numpy ``PCG64`` stream; a
triple is kept when its draw is ``< p``.  Same spec, same complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .complex import Complex2, complete_edges

RNG_ALGORITHM = "numpy.PCG64/lex-triples-v1"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class SampleSpec:
    """Parameters of one draw; give exactly one of ``p`` and ``c`` (p = c/n)."""

    n: int
    seed: int
    p: float | None = None
    c: float | None = None
    rng_algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if (self.p is None) == (self.c is None):
            raise ValueError("give exactly one of p or c")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.rng_algorithm != RNG_ALGORITHM:
            raise ValueError(f"unsupported rng_algorithm {self.rng_algorithm!r}")
        prob = self.probability
        if not 0.0 <= prob <= 1.0:
            raise ValueError(f"derived p={prob} is outside [0, 1]")

    @property
    def probability(self) -> float:
        return self.p if self.p is not None else self.c / self.n


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Per-trial stream seed: ``splitmix64(master + index * golden) mod 2^64``.

    The golden-ratio constant is odd, so ``index -> index * golden`` is a
    bijection mod 2^64, and the splitmix64 finalizer is a bijection; hence the
    map is injective in ``trial_index`` for any fixed master seed.
    """
    if trial_index < 0:
        raise ValueError("trial_index must be >= 0")
    return _splitmix64((master_seed + trial_index * _GOLDEN) & _MASK64)


@lru_cache(maxsize=8)
def _lex_triples(n: int) -> np.ndarray:
    """All triples i<j<k of range(n) in lexicographic order, shape (C(n,3), 3)."""
    out = np.empty((comb(n, 3), 3), dtype=np.int32)
    row = 0
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            m = n - 1 - j
            out[row:row + m, 0] = i
            out[row:row + m, 1] = j
            out[row:row + m, 2] = np.arange(j + 1, n)
            row += m
    out.setflags(write=False)
    return out


def sample(spec: SampleSpec) -> Complex2:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    triples = _lex_triples(spec.n)
    draws = rng.random(len(triples))
    kept = triples[draws < spec.probability]
    faces = frozenset(map(tuple, kept.tolist()))
    return Complex2(spec.n, faces, complete_edges(spec.n))
