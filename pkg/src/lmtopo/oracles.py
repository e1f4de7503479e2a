"""Slow, obviously-correct reference computations for cross-checking.

Everything here works on dense matrices or by brute-force enumeration and
shares no code with the sparse pipeline beyond the Complex2 type.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .complex import Complex2, make_complex


def dense_boundary(c: Complex2) -> list[list[int]]:
    """Boundary matrix with rows = sorted present edges, columns = sorted faces."""
    edges = sorted(c.edges_present)
    faces = sorted(c.faces)
    row = {e: r for r, e in enumerate(edges)}
    a = [[0] * len(faces) for _ in edges]
    for col, (i, j, k) in enumerate(faces):
        # alternating sum over the deleted vertex
        a[row[(j, k)]][col] += 1
        a[row[(i, k)]][col] -= 1
        a[row[(i, j)]][col] += 1
    return a


def rank_q(a: list[list[int]]) -> int:
    """Rank over Q with Fraction arithmetic."""
    m = [[Fraction(v) for v in r] for r in a]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def rank_fp(a: list[list[int]], p: int) -> int:
    m = np.array(a, dtype=object) % p if a and a[0] else np.zeros((0, 0), dtype=object)
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if m[r, col] % p), None)
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), -1, p)
        m[rank] = (m[rank] * inv) % p
        for r in range(rows):
            if r != rank and m[r, col] % p:
                m[r] = (m[r] - m[r, col] * m[rank]) % p
        rank += 1
    return rank


def snf_diagonal(a: list[list[int]]) -> list[int]:
    """Textbook Smith normal form: nonzero diagonal with d_1 | d_2 | ...

    Euclid-style reduction of the first row and column around the top-left
    entry, then recursion on the lower-right block.
    """
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    out = []
    for t in range(min(rows, cols)):
        nz = [(i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not nz:
            break
        i, j = nz[0]
        m[t], m[i] = m[i], m[t]
        for r in m:
            r[t], r[j] = r[j], r[t]
        while True:
            changed = False
            for i in range(t + 1, rows):
                while m[i][t]:
                    q = m[i][t] // m[t][t]
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        changed = True
            for j in range(t + 1, cols):
                while m[t][j]:
                    q = m[t][j] // m[t][t]
                    for r in m:
                        r[j] -= q * r[t]
                    if m[t][j]:
                        for r in m:
                            r[t], r[j] = r[j], r[t]
                        changed = True
            if changed:
                continue
            d = m[t][t]
            bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if m[i][j] % d]
            if not bad:
                break
            i, _ = bad[0]
            m[t] = [x + y for x, y in zip(m[t], m[i])]
        out.append(abs(m[t][t]))
    return out


def components(c: Complex2) -> int:
    seen = set()
    adj = {v: set() for v in range(c.n)}
    for i, j in c.edges_present:
        adj[i].add(j)
        adj[j].add(i)
    count = 0
    for v in range(c.n):
        if v in seen:
            continue
        count += 1
        stack = [v]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u] - seen)
    return count


def betti_dense(c: Complex2, p: int | None = None) -> tuple[int, int, int]:
    """(b0, b1, b2) over Q (p None) or F_p from the dense boundary matrix."""
    a = dense_boundary(c)
    r2 = (rank_q(a) if p is None else rank_fp(a, p)) if c.f2 else 0
    b0 = components(c)
    return b0, c.f1 - (c.n - b0) - r2, c.f2 - r2


def torsion_dense(c: Complex2) -> list[int]:
    if not c.f2:
        return []
    return sorted(d for d in snf_diagonal(dense_boundary(c)) if d > 1)


def collapse_random_order(c: Complex2, rng: random.Random) -> frozenset:
    """Collapse by rescanning all edges and picking a free one at random."""
    faces = set(c.faces)
    edges = set(c.edges_present)
    while True:
        deg = {}
        for f in faces:
            for e in combinations(f, 2):
                deg[e] = deg.get(e, 0) + 1
        free = sorted(e for e, d in deg.items() if d == 1 and e in edges)
        if not free:
            return frozenset(faces)
        e = rng.choice(free)
        (f,) = [f for f in faces if set(e) <= set(f)]
        faces.remove(f)
        edges.remove(e)


def tetra_boundaries_brute(c: Complex2) -> list[tuple[int, ...]]:
    return [q for q in combinations(range(c.n), 4)
            if all(t in c.faces for t in combinations(q, 3))]


def random_complex(rng: random.Random, n_max: int = 8) -> Complex2:
    n = rng.randint(3, n_max)
    p = rng.uniform(0.15, 0.9)
    faces = [t for t in combinations(range(n), 3) if rng.random() < p]
    return make_complex(n, faces)


@dataclass
class OracleReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def cross_check(iters: int = 500, n_max: int = 8, seed: int = 0, orders: int = 20,
                torsion_max_f2: int = 30) -> OracleReport:
    """Compare the sparse pipeline against the dense/brute-force references."""
    from .collapse import collapse_fully
    from .core import find_tetra_boundaries
    from .homology import betti, h1_torsion

    rng = random.Random(seed)
    rep = OracleReport()
    for it in range(iters):
        c = random_complex(rng, n_max)
        tag = f"#{it} n={c.n} f2={c.f2}"
        chi = c.n - c.f1 + c.f2
        for field_, p in (("Q", None), (2, 2)):
            fast = betti(c, field_).betti
            slow = betti_dense(c, p)
            if fast != slow:
                rep.failures.append(f"{tag}: betti over {field_} {fast} != {slow}")
            if fast[0] - fast[1] + fast[2] != chi:
                rep.failures.append(f"{tag}: Euler identity fails over {field_}")
        final = collapse_fully(c)[0].faces
        for _ in range(orders):
            if collapse_random_order(c, rng) != final:
                rep.failures.append(f"{tag}: collapse residue depends on order")
                break
        if find_tetra_boundaries(c) != tetra_boundaries_brute(c):
            rep.failures.append(f"{tag}: tetrahedron boundaries differ")
        if c.f2 <= torsion_max_f2 and h1_torsion(c) != torsion_dense(c):
            rep.failures.append(f"{tag}: torsion differs")
        rep.checked += 1
    return rep
