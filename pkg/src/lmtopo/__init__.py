"""Random 2-complexes in the Linial-Meshulam model: collapse, puncture, homology, certificates."""

__version__ = "0.1.0"

from .complex import (  # noqa: E402
    Complex2,
    ComplexError,
    EdgeIncidence,
    deserialize,
    double_tetrahedron,
    euler_characteristic,
    make_complex,
    read_complex,
    rp2,
    serialize,
    tetra_boundary,
    write_complex,
)
from .sampler import SampleSpec, derive_trial_seed, sample  # noqa: E402
from .collapse import (  # noqa: E402
    CollapseError,
    CollapseTrace,
    collapse_fully,
    elementary_collapse,
    free_edges,
    is_2_collapsible,
    one_round_collapse,
)
from .core import (  # noqa: E402
    CoreSubcomplex,
    TetraReport,
    extract_core,
    find_tetra_boundaries,
    puncture,
    shared_face_pairs,
)
from .homology import (  # noqa: E402
    HomologySummary,
    SparseBoundaryMatrix,
    betti,
    boundary2,
    h1_torsion,
    rank_mod_p,
)
from .certify import Certificate, Verdict, certify  # noqa: E402
from .constants import ThresholdConstant, solve_c2, solve_gamma2  # noqa: E402
