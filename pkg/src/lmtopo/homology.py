"""Boundary matrices, Betti numbers and H_1 torsion.

"Rational" Betti numbers are ranks over two fixed primes, falling back to
exact elimination over Q when the primes disagree.  Torsion is read off the
Smith normal form of the integer boundary map.  The elimination kernels live
in :mod:`lmtopo.linalg`.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complex import Complex2, Edge, Face, face_edges
from .linalg import (
    dense_snf_diagonal,
    is_prime,
    residual_rank_mod_p,
    residual_rank_rational,
    unit_elimination,
)

log = logging.getLogger(__name__)

# Largest primes below 2^23, the limit of the BLAS-backed dense kernel.
DEFAULT_PRIMES: tuple[int, int] = (8388593, 8388587)


@dataclass(frozen=True)
class SparseBoundaryMatrix:
    """Column-sparse matrix of the boundary map C_2 -> C_1.

    Rows are the present edges (sorted), columns the faces (sorted).  Face
    (i, j, k) has +1 on (j, k), -1 on (i, k) and +1 on (i, j).
    """

    rows: tuple[Edge, ...]
    cols: tuple[Face, ...]
    columns: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for j, col in enumerate(self.columns):
            for i, v in col:
                out[i, j] = v
        return out

    def to_coordinate_text(self) -> str:
        """``# rows cols`` header, then one ``row col value`` line per nonzero."""
        lines = [f"# {self.shape[0]} {self.shape[1]}"]
        for j, col in enumerate(self.columns):
            lines.extend(f"{i} {j} {v}" for i, v in sorted(col))
        return "\n".join(lines) + "\n"


def boundary2(c: Complex2) -> SparseBoundaryMatrix:
    """Boundary matrix of ``c``; rows cover every present edge, isolated or not."""
    rows = tuple(sorted(c.edges_present))
    row_of = {e: i for i, e in enumerate(rows)}
    cols = tuple(sorted(c.faces))
    columns = []
    for f in cols:
        ij, ik, jk = face_edges(f)
        columns.append(((row_of[jk], 1), (row_of[ik], -1), (row_of[ij], 1)))
    return SparseBoundaryMatrix(rows, cols, tuple(columns))


def rank_mod_p(m: SparseBoundaryMatrix, p: int) -> int:
    """Rank over the field with ``p`` elements.

    Raises:
        ValueError: if ``p`` is not prime.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    ones, rest = unit_elimination(m.columns)
    return ones + residual_rank_mod_p(rest, p)


def rank_rational(m: SparseBoundaryMatrix) -> int:
    """Exact rank over Q; slow on large residuals."""
    ones, rest = unit_elimination(m.columns)
    return ones + residual_rank_rational(rest)


def rational_rank(m: SparseBoundaryMatrix, primes: Sequence[int] = DEFAULT_PRIMES) -> int:
    """Rank over Q from several primes, exact elimination when they disagree."""
    for p in primes:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    ones, rest = unit_elimination(m.columns)
    ranks = {residual_rank_mod_p(rest, p) for p in primes}
    if len(ranks) == 1:
        return ones + ranks.pop()
    log.warning("primes %s disagree on rank %s; using exact elimination", primes, ranks)
    return ones + residual_rank_rational(rest)


@dataclass(frozen=True)
class HomologySummary:
    betti0: int
    betti1: int
    betti2: int
    coefficient_field: str
    torsion_h1: tuple[int, ...] | None = None
    primes: tuple[int, ...] = ()

    @property
    def betti(self) -> tuple[int, int, int]:
        return self.betti0, self.betti1, self.betti2

    def to_dict(self) -> dict:
        out = {"betti": list(self.betti), "field": self.coefficient_field}
        out["torsion"] = None if self.torsion_h1 is None else list(self.torsion_h1)
        if self.primes:
            out["primes"] = list(self.primes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def components(c: Complex2) -> int:
    """Connected components of the present-edge graph, isolated vertices included."""
    parent = list(range(c.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = c.n
    for i, j in c.edges_present:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            count -= 1
    return count


def field_name(coefficients) -> str:
    if coefficients in ("Q", "q", "rational", "rationals"):
        return "Q"
    p = int(coefficients)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return "F2" if p == 2 else f"F_{p}"


def _rank2(m: SparseBoundaryMatrix, coefficients, primes) -> int:
    if field_name(coefficients) == "Q":
        return rational_rank(m, primes)
    return rank_mod_p(m, int(coefficients))


def betti(
    c: Complex2,
    coefficients="Q",
    primes: Sequence[int] = DEFAULT_PRIMES,
    torsion: bool = False,
) -> HomologySummary:
    """Betti numbers with coefficients ``"Q"`` or a prime ``p``.

    With ``torsion`` the integer invariant factors of H_1 are attached too.
    """
    name = field_name(coefficients)
    r2 = _rank2(boundary2(c), coefficients, primes)
    b0 = components(c)
    b2 = c.f2 - r2
    b1 = c.f1 - (c.f0 - b0) - r2
    tors = tuple(h1_torsion(c)) if torsion else None
    return HomologySummary(b0, b1, b2, name, tors, tuple(primes) if name == "Q" else ())


def betti2(c: Complex2, coefficients="Q", primes: Sequence[int] = DEFAULT_PRIMES) -> int:
    return c.f2 - _rank2(boundary2(c), coefficients, primes)


def smith_invariants(m: SparseBoundaryMatrix) -> list[int]:
    """Nonzero Smith normal form entries of the integer matrix ``m``."""
    ones, rest = unit_elimination(m.columns, exhaustive=True)
    tail = dense_snf_diagonal(rest.to_lists()) if rest.rows and rest.cols else []
    return [1] * ones + tail


def h1_torsion(c: Complex2) -> list[int]:
    """Invariant factors > 1 of H_1(c; Z).

    H_1 is a direct summand of the cokernel of the boundary map C_2 -> C_1
    with free complement, so its torsion is the SNF diagonal above 1.
    """
    return sorted(d for d in smith_invariants(boundary2(c)) if d > 1)
