import random
from itertools import combinations

from lmtopo.certify import NOT_FREE_UNCONDITIONAL, Certificate, Verdict, certify, verify
from lmtopo.collapse import is_2_collapsible
from lmtopo.complex import double_tetrahedron, make_complex, rp2, tetra_boundary
from lmtopo.core import find_tetra_boundaries
from lmtopo.homology import betti2
from lmtopo.oracles import random_complex
from lmtopo.sampler import SampleSpec, derive_trial_seed, sample


def test_tetra_boundary_is_free():
    cert = certify(tetra_boundary())
    assert cert.verdict is Verdict.FREE
    assert cert.evidence.z_collapsible
    assert len(cert.evidence.z_trace) == 3
    assert verify(tetra_boundary(), cert)


def test_rp2_inconclusive_with_torsion_upgrade():
    plain = certify(rp2())
    assert plain.verdict is Verdict.INCONCLUSIVE
    assert plain.evidence.failed_stage == "z_not_collapsible"
    assert plain.evidence.upgrade is None
    cert = certify(rp2(), torsion=True)
    assert cert.verdict is Verdict.INCONCLUSIVE
    assert cert.evidence.torsion_h1 == (2,)
    assert cert.evidence.upgrade == NOT_FREE_UNCONDITIONAL
    assert cert.not_free
    assert any("torsion" in n for n in cert.evidence.notes)


def test_double_tetrahedron():
    cert = certify(double_tetrahedron())
    # Z is two boundaries with their common face removed: a 2-sphere
    assert cert.verdict is Verdict.NOT_FREE_MODULO_ASPHERICITY
    assert cert.evidence.betti2_z == 1
    assert len(cert.evidence.report.shared_face_pairs) == 1
    assert verify(double_tetrahedron(), cert)


def test_two_disjoint_boundaries_free():
    c = make_complex(8, list(combinations(range(4), 3)) + list(combinations(range(4, 8), 3)))
    assert certify(c).verdict is Verdict.FREE


def test_deterministic():
    y = sample(SampleSpec(n=30, c=3.0, seed=4))
    a, b = certify(y, torsion=True), certify(y, torsion=True)
    assert a.to_json() == b.to_json()
    assert a.verdict == b.verdict


def test_free_is_sound_and_matches_collapsibility():
    r = random.Random(21)
    seen = set()
    for _ in range(150):
        c = random_complex(r, 8)
        cert = certify(c)
        seen.add(cert.verdict)
        assert verify(c, cert)
        if not find_tetra_boundaries(c):
            assert (cert.verdict is Verdict.FREE) == is_2_collapsible(c)
        if cert.verdict is not Verdict.FREE:
            b2z = betti2(c.without_faces(cert.evidence.report.removed_faces))
            assert b2z >= betti2(c) - len(cert.evidence.report.boundaries)
    assert Verdict.FREE in seen and Verdict.NOT_FREE_MODULO_ASPHERICITY in seen


def test_verify_rejects_tampered_evidence():
    cert = certify(tetra_boundary())
    # the same evidence does not certify a different complex
    assert not verify(make_complex(5, list(combinations(range(4), 3)) + [(0, 1, 4), (0, 2, 4), (1, 2, 4)]), cert)


def test_certificate_dict():
    d = certify(rp2(), torsion=True).to_dict()
    assert d["verdict"] == "INCONCLUSIVE"
    assert d["upgrade"] == NOT_FREE_UNCONDITIONAL
    assert d["torsion_h1"] == [2]
    assert d["z_homology"]["betti"] == [1, 0, 0]


def test_majorities_at_n100():
    free = sum(certify(sample(SampleSpec(n=100, c=2.0, seed=derive_trial_seed(1, t)))).verdict
               is Verdict.FREE for t in range(15))
    nf = sum(certify(sample(SampleSpec(n=100, c=3.0, seed=derive_trial_seed(2, t)))).verdict
             is Verdict.NOT_FREE_MODULO_ASPHERICITY for t in range(15))
    assert free > 7 and nf > 7
