"""Freeness / non-freeness certificates for the fundamental group of a 2-complex.

FREE: tetrahedron boundaries are pairwise face-disjoint and the punctured
complex Z collapses to a graph.  Filling each boundary with a 3-simplex and
collapsing it from a free face turns the complex into Z without changing
pi_1, and a complex that collapses to a graph has free pi_1.

NOT_FREE_MODULO_ASPHERICITY: beta_2(Z; Q) > 0.  If Z is aspherical (true
with high probability in the random model, not checkable here) this forces
cohomological dimension two, so pi_1 is not free.

Everything else is INCONCLUSIVE.  With torsion enabled, torsion in H_1 rules
out freeness unconditionally (free groups have free abelianization); that is
recorded as an upgrade without changing the verdict.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Sequence

from .collapse import CollapseTrace, collapse_fully
from .complex import Complex2
from .core import TetraReport, find_tetra_boundaries, puncture, quad_faces, shared_face_pairs
from .homology import DEFAULT_PRIMES, HomologySummary, betti, h1_torsion


class Verdict(str, enum.Enum):
    FREE = "FREE"
    NOT_FREE_MODULO_ASPHERICITY = "NOT_FREE_MODULO_ASPHERICITY"
    INCONCLUSIVE = "INCONCLUSIVE"


NOT_FREE_UNCONDITIONAL = "NOT_FREE_UNCONDITIONAL"


@dataclass(frozen=True)
class Evidence:
    report: TetraReport
    z_trace: CollapseTrace
    z_homology: HomologySummary | None = None
    failed_stage: str | None = None
    torsion_h1: tuple[int, ...] | None = None
    upgrade: str | None = None
    notes: tuple[str, ...] = ()

    @property
    def z_collapsible(self) -> bool:
        return self.z_trace.final_f2 == 0

    @property
    def betti2_z(self) -> int:
        if self.z_homology is not None:
            return self.z_homology.betti2
        if self.z_collapsible:
            return 0
        raise ValueError("beta_2(Z) was not computed")


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    evidence: Evidence = field(repr=False)

    @property
    def not_free(self) -> bool:
        """True when some route (conditional or not) excludes a free pi_1."""
        return (
            self.verdict is Verdict.NOT_FREE_MODULO_ASPHERICITY
            or self.evidence.upgrade == NOT_FREE_UNCONDITIONAL
        )

    def to_dict(self) -> dict:
        ev = self.evidence
        return {
            "verdict": self.verdict.value,
            "upgrade": ev.upgrade,
            "failed_stage": ev.failed_stage,
            "tetra_report": ev.report.to_dict(),
            "z_collapse": {
                "initial_f2": ev.z_trace.initial_f2,
                "final_f2": ev.z_trace.final_f2,
                "steps": [{"edge": list(e), "face": list(f)} for e, f in ev.z_trace.steps],
            },
            "z_homology": None if ev.z_homology is None else ev.z_homology.to_dict(),
            "torsion_h1": None if ev.torsion_h1 is None else list(ev.torsion_h1),
            "notes": list(ev.notes),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def certify(c: Complex2, torsion: bool = False, primes: Sequence[int] = DEFAULT_PRIMES) -> Certificate:
    """Run puncture, collapse and homology on ``c`` and classify pi_1."""
    z, report = puncture(c)
    z_final, z_trace = collapse_fully(z)
    notes: list[str] = []

    tors = None
    if torsion:
        # collapses keep H_1, so the residue is enough
        tors = tuple(h1_torsion(collapse_fully(c)[0]))

    if report.face_disjoint and z_final.f2 == 0:
        if tors:
            raise AssertionError(f"FREE certificate contradicts H_1 torsion {tors}")
        return Certificate(Verdict.FREE, Evidence(report, z_trace, torsion_h1=tors))

    z_hom = None
    if z_final.f2:
        # R_inf(Z) is homotopy equivalent to Z
        z_hom = betti(z_final, "Q", primes)
    if z_hom is not None and z_hom.betti2 > 0:
        return Certificate(
            Verdict.NOT_FREE_MODULO_ASPHERICITY,
            Evidence(report, z_trace, z_hom, torsion_h1=tors),
        )

    if not report.face_disjoint:
        stage = "shared_faces"
        notes.append(f"{len(report.shared_face_pairs)} pair(s) of boundaries share a face")
    else:
        stage = "z_not_collapsible"
    if z_final.f2:
        notes.append("beta_2(Z; Q) = 0")
    upgrade = None
    if tors:
        upgrade = NOT_FREE_UNCONDITIONAL
        notes.append(f"H_1 has torsion {list(tors)}; pi_1 cannot be free")
    return Certificate(
        Verdict.INCONCLUSIVE,
        Evidence(report, z_trace, z_hom, stage, tors, upgrade, tuple(notes)),
    )


def verify(c: Complex2, cert: Certificate, primes: Sequence[int] = DEFAULT_PRIMES) -> bool:
    """Replay the evidence of ``cert`` against ``c`` from scratch."""
    ev = cert.evidence
    boundaries = find_tetra_boundaries(c)
    if list(ev.report.boundaries) != boundaries:
        return False
    removed = ev.report.removed_faces
    if not removed <= c.faces:
        return False
    if any(not (set(quad_faces(q)) & removed) for q in boundaries):
        return False
    z = c.without_faces(removed)
    if cert.verdict is Verdict.FREE:
        if shared_face_pairs(boundaries):
            return False
        try:
            return ev.z_trace.replay(z).f2 == 0
        except ValueError:
            return False
    if cert.verdict is Verdict.NOT_FREE_MODULO_ASPHERICITY:
        return betti(z, "Q", primes).betti2 >= 1
    return True
