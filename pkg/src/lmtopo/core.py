"""Cores, tetrahedron boundaries and puncturing.

A core is a 2-complex in which every edge lies in at least two faces.  The
faces that survive a full collapse, with their edges, form one.  Puncturing
deletes faces so that no tetrahedron boundary is left intact.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .collapse import collapse_fully
from .complex import Complex2, Edge, Face, face_edges

Quad = tuple[int, int, int, int]


@dataclass(frozen=True)
class CoreSubcomplex:
    faces: frozenset[Face]
    edges: frozenset[Edge]

    @property
    def is_empty(self) -> bool:
        return not self.faces

    def as_complex(self, n: int) -> Complex2:
        return Complex2(n, self.faces, self.edges)

    def min_edge_degree(self) -> int:
        deg: dict[Edge, int] = defaultdict(int)
        for f in self.faces:
            for e in face_edges(f):
                deg[e] += 1
        return min(deg.values(), default=0)


def extract_core(c: Complex2) -> CoreSubcomplex:
    """Faces left after collapsing ``c`` fully, with their induced edges.

    Empty exactly when ``c`` is 2-collapsible.
    """
    final, _ = collapse_fully(c)
    edges = frozenset(e for f in final.faces for e in face_edges(f))
    return CoreSubcomplex(final.faces, edges)


def find_tetra_boundaries(c: Complex2) -> list[Quad]:
    """All 4-sets of vertices whose four triangles are faces of ``c``, sorted.

    Each face (i, j, k) proposes the fourth vertices that close a triangle
    with all three of its edges; nothing scans the C(n, 4) quadruples.
    """
    faces = c.faces
    inc = c.incidence.cofaces
    found: set[Quad] = set()
    for f in faces:
        i, j, k = f
        # the other faces on edge (i, j) name the candidate fourth vertices
        for g in inc[(i, j)]:
            v = g[0] + g[1] + g[2] - i - j
            if v <= k:
                # report each boundary once, from its three smallest vertices
                continue
            if (i, k, v) in faces and (j, k, v) in faces:
                found.add((i, j, k, v))
    return sorted(found)


def quad_faces(q: Quad) -> list[Face]:
    return list(combinations(q, 3))


def shared_face_pairs(boundaries: list[Quad], c: Complex2 | None = None) -> list[tuple[int, int, Face]]:
    """Index pairs (i < j) of boundaries sharing a face, with that face.

    ``c`` is accepted for call-site symmetry; the boundaries carry their faces.
    """
    owners: dict[Face, list[int]] = defaultdict(list)
    for idx, q in enumerate(boundaries):
        for f in quad_faces(q):
            owners[f].append(idx)
    pairs = []
    for f, idxs in owners.items():
        for a, b in combinations(sorted(idxs), 2):
            pairs.append((a, b, f))
    return sorted(pairs)


@dataclass(frozen=True)
class TetraReport:
    boundaries: tuple[Quad, ...]
    shared_face_pairs: tuple[tuple[int, int, Face], ...]
    punctures: dict[Quad, Face] = field(default_factory=dict)

    @property
    def face_disjoint(self) -> bool:
        return not self.shared_face_pairs

    @property
    def removed_faces(self) -> frozenset[Face]:
        return frozenset(self.punctures.values())

    def to_dict(self) -> dict:
        return {
            "boundaries": [list(q) for q in self.boundaries],
            "shared": [[a, b, list(f)] for a, b, f in self.shared_face_pairs],
            "punctures": {" ".join(map(str, q)): list(f) for q, f in self.punctures.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def choose_punctures(boundaries: list[Quad]) -> dict[Quad, Face]:
    """Faces to delete so every boundary loses at least one.

    Faces hitting several unhit boundaries go first (most hits, then smallest
    face); every boundary still intact afterwards loses its smallest face.
    Each boundary maps to the first deleted face that hit it.
    """
    owners: dict[Face, list[int]] = defaultdict(list)
    for idx, q in enumerate(boundaries):
        for f in quad_faces(q):
            owners[f].append(idx)
    hit: dict[int, Face] = {}
    while True:
        best, best_count = None, 1
        for f in sorted(owners):
            cnt = sum(1 for i in owners[f] if i not in hit)
            if cnt > best_count:
                best, best_count = f, cnt
        if best is None:
            break
        for i in owners[best]:
            hit.setdefault(i, best)
    for idx, q in enumerate(boundaries):
        if idx not in hit:
            hit[idx] = min(quad_faces(q))
    return {boundaries[i]: f for i, f in sorted(hit.items())}


def puncture(c: Complex2, boundaries: list[Quad] | None = None) -> tuple[Complex2, TetraReport]:
    """Delete faces from ``c`` until no tetrahedron boundary survives.

    Returns the punctured complex Z and the report.  Only faces are removed,
    so no new boundary can appear; this is re-checked on Z.
    """
    if boundaries is None:
        boundaries = find_tetra_boundaries(c)
    boundaries = sorted(boundaries)
    punctures = choose_punctures(boundaries)
    z = c.without_faces(punctures.values())
    leftover = find_tetra_boundaries(z)
    if leftover:
        raise RuntimeError(f"puncturing left boundaries intact: {leftover}")
    report = TetraReport(tuple(boundaries), tuple(shared_face_pairs(boundaries)), punctures)
    return z, report
