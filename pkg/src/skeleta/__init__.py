"""Combinatorial Legendrian skeleta of reflexive polytopes and their E2 homology."""

from ._kernels import BACKEND
from .exactla import (
    IntMatrix,
    SmithDecomposition,
    integer_kernel,
    rank_q,
    smith_normal_form,
    solve_exact,
    wedge_matrix,
)
from .homology import BigradedComplex, HomologyReport, build_complex, euler_characteristic, homology_q, homology_z
from .oracles import VerificationReport, bkk_euler, dk_curve_betti, verify
from .polytope import (
    Face,
    FaceLattice,
    LatticePolytope,
    enumerate_faces,
    is_facet_simplicial,
    is_reflexive,
    is_vertex_simplicial,
    lattice_points,
    normalized_volume,
    polar_dual,
)
from .skeleton import AttachingMap, FaceGroupData, StackyFan, attaching_map, chart, face_group, stacky_fan, strata

__version__ = "0.1.0"
