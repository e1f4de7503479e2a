"""Exact rank kernels for sparse integer matrices.

The sparse phase eliminates over Z using only +-1 pivots.  Such pivots are
units in every coefficient ring, so for any field F

    rank_F(A) = (number of unit pivots) + rank_F(residual),

and the Smith normal form of A is that many 1s followed by the SNF of the
residual.  One sparse pass therefore serves every prime, the exact rational
fallback and the torsion computation.  Pivot choice is Markowitz-style: the
sparsest live column, then its shortest row holding a unit.  The phase stops
once the active block is dense; the residual then goes to a dense kernel.
"""

from __future__ import annotations

import heapq

import numpy as np
from numba import njit

DENSE_SWITCH_DENSITY = 0.04
DENSE_SWITCH_MIN_DIM = 64
PANEL_WIDTH = 128

# float64 residues are exact while PANEL_WIDTH * (p - 1)^2 + p < 2^53
FLOAT_PRIME_LIMIT = 1 << 23
INT64_PRIME_LIMIT = 1 << 31


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, exact for all p < 3.3e24."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class ActiveMatrix:
    """Integer matrix as row dicts plus column row-sets, shrinking under pivots."""

    def __init__(self, columns):
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        self.nnz = 0
        for j, col in enumerate(columns):
            rs = set()
            for i, v in col:
                if v:
                    self.rows.setdefault(i, {})[j] = v
                    rs.add(i)
                    self.nnz += 1
            if rs:
                self.cols[j] = rs
        self.heap = [(len(rs), j) for j, rs in self.cols.items()]
        heapq.heapify(self.heap)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def density(self) -> float:
        cells = len(self.rows) * len(self.cols)
        return self.nnz / cells if cells else 1.0

    def next_column(self) -> int | None:
        heap, cols = self.heap, self.cols
        while heap:
            cnt, j = heapq.heappop(heap)
            rs = cols.get(j)
            if rs is None:
                continue
            if not rs:
                del cols[j]
                continue
            if len(rs) != cnt:
                heapq.heappush(heap, (len(rs), j))
                continue
            return j
        return None

    def pivot(self, i: int, j: int) -> None:
        """Clear column ``j`` using the unit at (i, j), then drop row i and column j."""
        rows, cols = self.rows, self.cols
        prow = rows.pop(i)
        self.nnz -= len(prow)
        pv = prow.pop(j)
        if pv not in (1, -1):
            raise ValueError("pivot must be a unit")
        for jj in prow:
            cols[jj].discard(i)
        others = cols.pop(j)
        others.discard(i)
        for k in others:
            rk = rows[k]
            f = rk.pop(j) * pv
            self.nnz -= 1
            for jj, v in prow.items():
                old = rk.get(jj)
                if old is None:
                    rk[jj] = -f * v
                    cols[jj].add(k)
                    self.nnz += 1
                else:
                    nv = old - f * v
                    if nv:
                        rk[jj] = nv
                    else:
                        del rk[jj]
                        cols[jj].discard(k)
                        self.nnz -= 1
            if not rk:
                del rows[k]
        heap = self.heap
        for jj in prow:
            rs = cols.get(jj)
            if rs is not None:
                heapq.heappush(heap, (len(rs), jj))

    def find_unit(self) -> tuple[int, int] | None:
        for i in sorted(self.rows):
            for j, v in sorted(self.rows[i].items()):
                if v == 1 or v == -1:
                    return i, j
        return None

    def residual(self) -> tuple[list[int], list[int]]:
        return sorted(self.rows), sorted(self.cols)

    def to_array(self, modulus: int | None = None, dtype=np.float64) -> np.ndarray:
        row_ids, col_ids = self.residual()
        col_pos = {j: t for t, j in enumerate(col_ids)}
        out = np.zeros((len(row_ids), len(col_ids)), dtype=dtype)
        for r, i in enumerate(row_ids):
            line = out[r]
            for j, v in self.rows[i].items():
                line[col_pos[j]] = v % modulus if modulus else v
        return out

    def to_lists(self) -> list[list[int]]:
        row_ids, col_ids = self.residual()
        col_pos = {j: t for t, j in enumerate(col_ids)}
        block = [[0] * len(col_ids) for _ in row_ids]
        for r, i in enumerate(row_ids):
            line = block[r]
            for j, v in self.rows[i].items():
                line[col_pos[j]] = v
        return block


def unit_elimination(columns, exhaustive: bool = False) -> tuple[int, ActiveMatrix]:
    """Sparse +-1 pivoting; returns (pivot count, residual).

    With ``exhaustive`` unit pivots keep being taken after the block turns
    dense, until none is left (used for Smith normal form).
    """
    active = ActiveMatrix(columns)
    count = 0
    parked: list[int] = []
    rows = active.rows
    while True:
        r, c = active.shape
        if (
            r >= DENSE_SWITCH_MIN_DIM
            and c >= DENSE_SWITCH_MIN_DIM
            and active.nnz > DENSE_SWITCH_DENSITY * r * c
        ):
            break
        j = active.next_column()
        if j is None:
            break
        best, best_len = -1, 0
        for i in active.cols[j]:
            v = rows[i][j]
            if v != 1 and v != -1:
                continue
            ln = len(rows[i])
            if best < 0 or ln < best_len or (ln == best_len and i < best):
                best, best_len = i, ln
        if best < 0:
            parked.append(j)
            continue
        active.pivot(best, j)
        count += 1
    for j in parked:
        rs = active.cols.get(j)
        if rs is not None:
            heapq.heappush(active.heap, (len(rs), j))
    if exhaustive:
        while (unit := active.find_unit()) is not None:
            active.pivot(*unit)
            count += 1
    return count, active


# --------------------------------------------------------------------------
# dense kernels


@njit(cache=True, inline="always")
def _fmod(x, p, pinv):
    """x mod p for an integer-valued float |x| < 2^53; the quotient may be off by one."""
    r = x - np.floor(x * pinv) * p
    if r < 0.0:
        r += p
    elif r >= p:
        r -= p
    return r


@njit(cache=True)
def _fmod_pow(base, e, p, pinv):
    out = 1.0
    while e > 0:
        if e & 1:
            x = out * base
            out = _fmod(x, p, pinv)
        x = base * base
        base = _fmod(x, p, pinv)
        e >>= 1
    return out


@njit(cache=True)
def _panel_lu(a, p, pinv):
    """Row-pivoted elimination of a tall panel of float64 residues.

    Returns (perm, L, k): ``a[perm]`` equals L times an echelon form with k
    pivots; L is unit lower triangular in its first k rows.
    """
    m, w = a.shape
    perm = np.arange(m)
    L = np.zeros((m, w))
    k = 0
    for c in range(w):
        piv = -1
        for i in range(k, m):
            if a[i, c] != 0.0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != k:
            for t in range(w):
                tmp = a[k, t]
                a[k, t] = a[piv, t]
                a[piv, t] = tmp
            for t in range(k):
                tmp = L[k, t]
                L[k, t] = L[piv, t]
                L[piv, t] = tmp
            tp = perm[k]
            perm[k] = perm[piv]
            perm[piv] = tp
        inv = _fmod_pow(a[k, c], int(p) - 2, p, pinv)
        L[k, k] = 1.0
        for i in range(k + 1, m):
            f = a[i, c]
            if f != 0.0:
                x = f * inv
                f = _fmod(x, p, pinv)
                L[i, k] = f
                a[i, c] = 0.0
                for t in range(c + 1, w):
                    x = a[i, t] - f * a[k, t]
                    a[i, t] = _fmod(x, p, pinv)
        k += 1
        if k == m:
            break
    return perm, L[:, :k].copy(), k


@njit(cache=True)
def _unit_lower_inverse(L, p, pinv):
    k = L.shape[0]
    inv = np.zeros((k, k))
    for j in range(k):
        inv[j, j] = 1.0
        for i in range(j + 1, k):
            s = 0.0
            for t in range(j, i):
                x = s + L[i, t] * inv[t, j]
                s = _fmod(x, p, pinv)
            inv[i, j] = p - s if s != 0.0 else 0.0
    return inv


@njit(cache=True)
def _reduce_into(acc, base, p, pinv):
    m, n = acc.shape
    for i in range(m):
        for j in range(n):
            x = acc[i, j] + base[i, j]
            acc[i, j] = _fmod(x, p, pinv)


def dense_rank_float(a: np.ndarray, p: int) -> int:
    """Rank mod p (p < 2^23) by blocked LU; trailing updates go through BLAS."""
    fp, pinv = float(p), 1.0 / p
    a = np.mod(np.asarray(a, dtype=np.float64), fp)
    r = 0
    while a.shape[0] and a.shape[1]:
        m, n = a.shape
        w = min(PANEL_WIDTH, n)
        perm, L, k = _panel_lu(np.ascontiguousarray(a[:, :w]), fp, pinv)
        r += k
        if w == n or k == m:
            break
        if k == 0:
            a = a[:, w:]
            continue
        u12 = _unit_lower_inverse(L[:k], fp, pinv) @ a[perm[:k], w:]
        _reduce_into(u12, np.zeros_like(u12), fp, pinv)
        neg = fp - u12
        neg[neg == fp] = 0.0
        acc = L[k:] @ neg
        _reduce_into(acc, a[perm[k:], w:], fp, pinv)
        a = acc
    return r


@njit(cache=True)
def dense_rank_int64(a, p):
    """Rank mod p for p < 2^31 on an int64 array of residues (destroys ``a``)."""
    m, n = a.shape
    r = 0
    for c in range(n):
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for t in range(c, n):
                tmp = a[r, t]
                a[r, t] = a[piv, t]
                a[piv, t] = tmp
        inv = 1
        base = a[r, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for i in range(r + 1, m):
            f = a[i, c] * inv % p
            if f != 0:
                for t in range(c, n):
                    a[i, t] = (a[i, t] - f * a[r, t]) % p
        r += 1
        if r == m:
            break
    return r


def dense_rank_python(block: list[list[int]], p: int) -> int:
    a = [[v % p for v in row] for row in block]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        row_r = a[r]
        for i in range(r + 1, m):
            row_i = a[i]
            if row_i[c]:
                f = row_i[c] * inv % p
                for t in range(c, n):
                    row_i[t] = (row_i[t] - f * row_r[t]) % p
        r += 1
    return r


def bareiss_rank(block: list[list[int]]) -> int:
    """Exact rank over Q by fraction-free elimination (Python integers)."""
    a = [list(row) for row in block]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pv = pr[c]
        for i in range(r + 1, m):
            ri = a[i]
            f = ri[c]
            for t in range(c + 1, n):
                ri[t] = (pv * ri[t] - f * pr[t]) // prev
            ri[c] = 0
        prev = pv
        r += 1
    return r


def residual_rank_mod_p(active: ActiveMatrix, p: int) -> int:
    if not active.rows or not active.cols:
        return 0
    if p < FLOAT_PRIME_LIMIT:
        return dense_rank_float(active.to_array(p), p)
    if p < INT64_PRIME_LIMIT:
        return int(dense_rank_int64(active.to_array(p, dtype=np.int64), p))
    return dense_rank_python(active.to_lists(), p)


def residual_rank_rational(active: ActiveMatrix) -> int:
    if not active.rows or not active.cols:
        return 0
    return bareiss_rank(active.to_lists())


def dense_snf_diagonal(block: list[list[int]]) -> list[int]:
    """Nonzero Smith invariants of a dense integer matrix, as a divisibility chain."""
    a = [list(r) for r in block]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < m and t < n:
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    ri, rt = a[i], a[t]
                    for k in range(t, n):
                        ri[k] -= q * rt[k]
                    if ri[t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        clean = False
            if clean:
                bad = next(
                    (i for i in range(t + 1, m) if any(v % piv for v in a[i][t + 1:])),
                    None,
                )
                if bad is None:
                    break
                rb, rt = a[bad], a[t]
                for k in range(t, n):
                    rt[k] += rb[k]
                continue
            # a remainder is now smaller than the pivot; bring it to (t, t)
            cand = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            _, i, j = min(cand)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag
