"""Two-dimensional simplicial complexes with an explicit edge set.

Faces are sorted vertex triples, edges are sorted vertex pairs.  A freshly
built complex carries the complete graph on its vertices as 1-skeleton;
collapses shrink the edge set, so it is stored rather than implied.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable

Edge = tuple[int, int]
Face = tuple[int, int, int]


class ComplexError(ValueError):
    """Raised for malformed complexes or complex files."""


def face_edges(face: Face) -> tuple[Edge, Edge, Edge]:
    """Edges of a sorted triple, in lexicographic order."""
    i, j, k = face
    return (i, j), (i, k), (j, k)


@lru_cache(maxsize=16)
def complete_edges(n: int) -> frozenset[Edge]:
    return frozenset(combinations(range(n), 2))


@dataclass(frozen=True)
class EdgeIncidence:
    """Face-degree and coface lists for each edge of a complex."""

    cofaces: dict[Edge, tuple[Face, ...]]

    @property
    def degree(self) -> dict[Edge, int]:
        return {e: len(fs) for e, fs in self.cofaces.items()}

    def degree_of(self, edge: Edge) -> int:
        return len(self.cofaces.get(edge, ()))

    @classmethod
    def build(cls, edges: Iterable[Edge], faces: Iterable[Face]) -> "EdgeIncidence":
        cof: dict[Edge, list[Face]] = {e: [] for e in edges}
        for f in sorted(faces):
            for e in face_edges(f):
                cof[e].append(f)
        return cls({e: tuple(fs) for e, fs in cof.items()})


class IncidenceIndex:
    """Mutable edge -> cofaces index, updated in place as faces go away.

    Used by the collapse engine; ``snapshot()`` must always agree with
    ``EdgeIncidence.build`` on the current edge and face sets.
    """

    def __init__(self, edges: Iterable[Edge], faces: Iterable[Face]):
        self.edges: set[Edge] = set(edges)
        self.faces: set[Face] = set(faces)
        self.cofaces: dict[Edge, set[Face]] = defaultdict(set)
        for f in self.faces:
            for e in face_edges(f):
                self.cofaces[e].add(f)

    def degree(self, edge: Edge) -> int:
        s = self.cofaces.get(edge)
        return len(s) if s else 0

    def remove_face(self, face: Face) -> None:
        self.faces.remove(face)
        for e in face_edges(face):
            self.cofaces[e].discard(face)

    def remove_edge(self, edge: Edge) -> None:
        if self.degree(edge):
            raise ComplexError(f"edge {edge} still has cofaces")
        self.edges.remove(edge)
        self.cofaces.pop(edge, None)

    def snapshot(self) -> EdgeIncidence:
        return EdgeIncidence(
            {e: tuple(sorted(self.cofaces.get(e, ()))) for e in self.edges}
        )


@dataclass(frozen=True)
class Complex2:
    """An immutable 2-complex on vertices ``0..n-1``.

    Build through :func:`make_complex`; the constructor trusts its inputs.
    """

    n: int
    faces: frozenset[Face]
    edges_present: frozenset[Edge] = field(repr=False)

    @property
    def f0(self) -> int:
        return self.n

    @property
    def f1(self) -> int:
        return len(self.edges_present)

    @property
    def f2(self) -> int:
        return len(self.faces)

    @cached_property
    def incidence(self) -> EdgeIncidence:
        return EdgeIncidence.build(self.edges_present, self.faces)

    def sorted_faces(self) -> list[Face]:
        return sorted(self.faces)

    def without_faces(self, removed: Iterable[Face]) -> "Complex2":
        """Same edge set, fewer faces."""
        return Complex2(self.n, self.faces.difference(removed), self.edges_present)

    def check(self) -> None:
        """Validate the structural invariants; raise ComplexError on failure."""
        for f in self.faces:
            i, j, k = f
            if not (0 <= i < j < k < self.n):
                raise ComplexError(f"face {f} is not a sorted triple in [0, {self.n})")
            for e in face_edges(f):
                if e not in self.edges_present:
                    raise ComplexError(f"face {f} uses missing edge {e}")
        for i, j in self.edges_present:
            if not (0 <= i < j < self.n):
                raise ComplexError(f"edge {(i, j)} out of range")


def normalize_face(vertices: Iterable[int], n: int) -> Face:
    vs = tuple(int(v) for v in vertices)
    if len(vs) != 3:
        raise ComplexError(f"a face needs exactly 3 vertices, got {vs}")
    for v in vs:
        if not 0 <= v < n:
            raise ComplexError(f"vertex {v} out of range for n={n}")
    if len(set(vs)) != 3:
        raise ComplexError(f"face {vs} repeats a vertex")
    a, b, c = sorted(vs)
    return a, b, c


def make_complex(n: int, faces: Iterable[Iterable[int]]) -> Complex2:
    """Validate and normalize a face list into a complex on the complete graph K_n.

    Raises:
        ComplexError: on a negative ``n``, out-of-range or repeated vertices,
            or a face listed twice (in any vertex order).
    """
    if n < 0:
        raise ComplexError(f"vertex count must be >= 0, got {n}")
    seen: set[Face] = set()
    for raw in faces:
        f = normalize_face(raw, n)
        if f in seen:
            raise ComplexError(f"duplicate face {f}")
        seen.add(f)
    return Complex2(n, frozenset(seen), complete_edges(n))


def euler_characteristic(c: Complex2) -> int:
    return c.f0 - c.f1 + c.f2


def serialize(c: Complex2) -> str:
    lines = [f"n={c.n}"]
    lines.extend(f"{i} {j} {k}" for i, j, k in c.sorted_faces())
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> Complex2:
    """Parse the ``.c2x`` text format.

    The first non-comment line is ``n=<int>``; each further non-empty line is a
    face given as three whitespace-separated vertices in any order.
    """
    n = None
    faces = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            key, sep, value = line.partition("=")
            if key.strip() != "n" or not sep:
                raise ComplexError(f"line {lineno}: expected header 'n=<integer>'")
            try:
                n = int(value.strip())
            except ValueError:
                raise ComplexError(f"line {lineno}: bad vertex count {value!r}") from None
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ComplexError(f"line {lineno}: expected 3 vertices, got {line!r}")
        try:
            faces.append(tuple(int(p) for p in parts))
        except ValueError:
            raise ComplexError(f"line {lineno}: non-integer vertex in {line!r}") from None
    if n is None:
        raise ComplexError("missing 'n=<integer>' header")
    return make_complex(n, faces)


def read_complex(path) -> Complex2:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())


def write_complex(c: Complex2, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(c))


def tetra_boundary(vertices: Iterable[int] = (0, 1, 2, 3), n: int | None = None) -> Complex2:
    """Boundary of the tetrahedron on four given vertices."""
    vs = sorted(vertices)
    return make_complex(n if n is not None else max(vs) + 1, combinations(vs, 3))


# Minimal 6-vertex triangulation of the real projective plane
# (hemi-icosahedron): 6 vertices, 15 edges, 10 faces.
RP2_FACES: tuple[Face, ...] = (
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
)


def rp2() -> Complex2:
    return make_complex(6, RP2_FACES)


def double_tetrahedron() -> Complex2:
    """Two tetrahedron boundaries glued along the face (0, 1, 2)."""
    faces = set(combinations((0, 1, 2, 3), 3)) | set(combinations((0, 1, 2, 4), 3))
    return make_complex(5, faces)
