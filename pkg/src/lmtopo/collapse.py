"""Elementary collapses of 2-complexes along free edges.

An edge is free when exactly one face contains it.  Collapsing removes the
edge and that face.  ``collapse_fully`` runs a FIFO worklist seeded with the
free edges in lexicographic order; edges freed along the way are appended.
Edges left with no cofaces stay in the complex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .complex import Complex2, ComplexError, Edge, Face, IncidenceIndex, face_edges


class CollapseError(ValueError):
    """Collapse requested at an edge that is not free."""


@dataclass(frozen=True)
class CollapseTrace:
    steps: tuple[tuple[Edge, Face], ...]
    initial_f2: int
    final_f2: int

    def __len__(self):
        return len(self.steps)

    def replay(self, start: Complex2) -> Complex2:
        """Re-run the steps on ``start``; raises CollapseError on an illegal step."""
        idx = IncidenceIndex(start.edges_present, start.faces)
        for edge, face in self.steps:
            _collapse_in_place(idx, edge, expected_face=face)
        return Complex2(start.n, frozenset(idx.faces), frozenset(idx.edges))

    def to_json(self) -> str:
        return json.dumps(
            [{"edge": list(e), "face": list(f)} for e, f in self.steps]
        )


def _collapse_in_place(idx: IncidenceIndex, edge: Edge, expected_face: Face | None = None) -> Face:
    cof = idx.cofaces.get(edge)
    if edge not in idx.edges or not cof or len(cof) != 1:
        raise CollapseError(f"edge {edge} is not free (degree {idx.degree(edge)})")
    (face,) = cof
    if expected_face is not None and face != expected_face:
        raise CollapseError(f"edge {edge} is free in {face}, not {expected_face}")
    idx.remove_face(face)
    idx.remove_edge(edge)
    return face


def free_edges(c: Complex2) -> list[Edge]:
    inc = c.incidence.cofaces
    return sorted(e for e, fs in inc.items() if len(fs) == 1)


def elementary_collapse(c: Complex2, e: Edge) -> Complex2:
    e = tuple(sorted(e))
    cof = c.incidence.cofaces.get(e)
    if cof is None or len(cof) != 1:
        raise CollapseError(f"edge {e} is not free (degree {0 if cof is None else len(cof)})")
    return Complex2(c.n, c.faces - {cof[0]}, c.edges_present - {e})


def _run_worklist(c: Complex2, order: list[Edge]) -> tuple[Complex2, CollapseTrace]:
    idx = IncidenceIndex(c.edges_present, c.faces)
    queue = list(order)
    steps: list[tuple[Edge, Face]] = []
    head = 0
    while head < len(queue):
        e = queue[head]
        head += 1
        cof = idx.cofaces.get(e)
        if not cof or len(cof) != 1 or e not in idx.edges:
            continue
        face = _collapse_in_place(idx, e)
        steps.append((e, face))
        for other in face_edges(face):
            if other != e and idx.degree(other) == 1:
                queue.append(other)
    final = Complex2(c.n, frozenset(idx.faces), frozenset(idx.edges))
    return final, CollapseTrace(tuple(steps), c.f2, final.f2)


def collapse_fully(c: Complex2) -> tuple[Complex2, CollapseTrace]:
    """Collapse until no free edge remains; the result is R_inf(c).

    Total work is linear in the number of faces and edges.
    """
    return _run_worklist(c, free_edges(c))


def one_round_collapse(c: Complex2) -> Complex2:
    """R(c): one pass over a snapshot of the free edges, lexicographic order.

    An edge whose coface was already removed earlier in the pass is skipped.
    """
    idx = IncidenceIndex(c.edges_present, c.faces)
    for e in free_edges(c):
        if idx.degree(e) == 1:
            _collapse_in_place(idx, e)
    return Complex2(c.n, frozenset(idx.faces), frozenset(idx.edges))


def is_2_collapsible(c: Complex2) -> bool:
    return collapse_fully(c)[0].f2 == 0


__all__ = [
    "CollapseError",
    "CollapseTrace",
    "ComplexError",
    "collapse_fully",
    "elementary_collapse",
    "free_edges",
    "is_2_collapsible",
    "one_round_collapse",
]
