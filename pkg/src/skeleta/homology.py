"""The bigraded E1 complex of the skeleton and its E2 page.

``C[deg, r]`` is the direct sum, over faces of dimension ``deg``, of
``|P_F|`` copies of the r-th exterior power of ``M_F``. The differential
lowers ``deg`` by one and keeps ``r``: a generator over ``F'`` is pushed
forward along the inclusion into each codimension-one subface ``F`` and
weighted by the incidence sign.

Over ℚ the E2 ranks are reported as conjectural Betti numbers of the
skeleton (degeneration at E2 is conjectured, not proved). Over ℤ only the
E2 page itself is reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

import numpy as np

from .exactla import IntMatrix, invariant_factors, rank_multimodular, wedge_matrix
from .polytope import Face, FaceLattice, LatticePolytope, enumerate_faces
from .skeleton import FaceGroupData, face_group_from_matrix, inclusion_map

BasisElement = tuple[Face, tuple[int, ...], tuple[int, ...]]


class BoundarySquareError(RuntimeError):
    """The assembled differential does not square to zero."""


@dataclass
class BigradedComplex:
    n: int
    lattice: FaceLattice
    groups: dict[Face, FaceGroupData]
    bases: dict[tuple[int, int], list[BasisElement]]
    boundaries: dict[tuple[int, int], IntMatrix]

    @property
    def dims(self) -> dict[tuple[int, int], int]:
        return {k: len(v) for k, v in self.bases.items()}

    def dim(self, deg: int, r: int) -> int:
        return len(self.bases.get((deg, r), ()))

    def boundary(self, deg: int, r: int) -> IntMatrix:
        """``D[deg, r] : C[deg, r] -> C[deg - 1, r]`` (zero map when out of range)."""
        if (deg, r) in self.boundaries:
            return self.boundaries[(deg, r)]
        return IntMatrix.zeros(self.dim(deg - 1, r), self.dim(deg, r))

    def check_boundary_squared(self) -> None:
        for (deg, r), d_hi in self.boundaries.items():
            if (deg - 1, r) not in self.boundaries:
                continue
            prod = self.boundaries[(deg - 1, r)] @ d_hi
            if not prod.is_zero():
                raise BoundarySquareError(f"D[{deg - 1},{r}] @ D[{deg},{r}] != 0")


def _basis(face_list, groups, r):
    out = []
    for f in face_list:
        g = groups[f]
        for k in g.components:
            for subset in combinations(range(g.torus_rank), r):
                out.append((f, k, subset))
    return out


def build_complex(
    p: LatticePolytope, groups: Mapping[Face, FaceGroupData] | None = None
) -> BigradedComplex:
    """Assemble the E1 page of a reflexive facet-simplicial polytope.

    ``groups`` may override the per-face data (e.g. with a different ``M_F``
    basis); by default it is computed from the polytope.
    """
    lattice = enumerate_faces(p)
    n = p.ambient_rank - 1
    if groups is None:
        groups = {
            f: face_group_from_matrix(f, p.vertex_matrix(f.vertex_indices)) for f in lattice.all_faces()
        }
    else:
        groups = dict(groups)

    bases: dict[tuple[int, int], list[BasisElement]] = {}
    for deg in range(n + 1):
        for r in range(n - deg + 1):
            bases[(deg, r)] = _basis(lattice.faces[deg], groups, r)
    index = {key: {e: i for i, e in enumerate(b)} for key, b in bases.items()}

    maps = {}
    for f, fp, _ in lattice.incidences:
        maps[(f, fp)] = inclusion_map(groups[f], groups[fp])

    boundaries: dict[tuple[int, int], IntMatrix] = {}
    for deg in range(1, n + 1):
        for r in range(n - deg + 1):
            rows_idx = index[(deg - 1, r)]
            cols = bases[(deg, r)]
            mat = np.zeros((len(rows_idx), len(cols)), dtype=object)
            wedges = {}
            for j, (fp, k, subset) in enumerate(cols):
                gp = groups[fp]
                for f, eps in lattice.boundary(fp):
                    amap = maps[(f, fp)]
                    key = (f, fp)
                    if key not in wedges:
                        wedges[key] = (
                            wedge_matrix(amap.torus_map, r).tolist(),
                            list(combinations(range(groups[f].torus_rank), r)),
                            {s: c for c, s in enumerate(combinations(range(gp.torus_rank), r))},
                        )
                    w, row_sets, col_pos = wedges[key]
                    image = amap.component_images[gp.component_index(k)]
                    c = col_pos[subset]
                    for ri, rs in enumerate(row_sets):
                        x = w[ri][c]
                        if x:
                            mat[rows_idx[(f, image, rs)], j] += eps * x
            boundaries[(deg, r)] = IntMatrix(mat, mat.shape)
    return BigradedComplex(n, lattice, groups, bases, boundaries)


@dataclass
class HomologyReport:
    ring: str
    e2_dims: dict[tuple[int, int], int]
    betti: tuple[int, ...]
    euler: int
    ranks: dict[tuple[int, int], int]
    torsion: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    conjectural_degeneration: bool = False

    @property
    def note(self) -> str:
        if self.ring == "q":
            return "E2 over Q; equals the homology of the skeleton if the spectral sequence degenerates (conjectural)"
        return "E2 over Z only; degeneration over Z is not expected in general"


def euler_characteristic(c: BigradedComplex) -> int:
    return sum((-1) ** (deg + r) * dim for (deg, r), dim in c.dims.items())


def _assemble(c: BigradedComplex, ranks, ring, torsion=None) -> HomologyReport:
    e2 = {}
    for (deg, r), dim in c.dims.items():
        e2[(deg, r)] = dim - ranks.get((deg, r), 0) - ranks.get((deg + 1, r), 0)
    betti = [0] * (c.n + 1)
    for (deg, r), v in e2.items():
        betti[deg + r] += v
    return HomologyReport(
        ring=ring,
        e2_dims=e2,
        betti=tuple(betti),
        euler=euler_characteristic(c),
        ranks=dict(ranks),
        torsion=torsion or {},
        conjectural_degeneration=(ring == "q"),
    )


def homology_q(c: BigradedComplex) -> HomologyReport:
    """E2 ranks over ℚ, assembled into Betti numbers along antidiagonals."""
    c.check_boundary_squared()
    ranks = {key: rank_multimodular(m) for key, m in c.boundaries.items()}
    return _assemble(c, ranks, "q")


def homology_z(c: BigradedComplex) -> HomologyReport:
    """Integral E2: free ranks plus torsion invariant factors per bidegree."""
    c.check_boundary_squared()
    factors = {key: invariant_factors(m) for key, m in c.boundaries.items()}
    ranks = {key: len(v) for key, v in factors.items()}
    torsion = {}
    for deg, r in c.dims:
        # ker D[deg] is saturated, so torsion of ker/im is that of coker D[deg+1]
        tors = tuple(x for x in factors.get((deg + 1, r), ()) if x > 1)
        if tors:
            torsion[(deg, r)] = tors
    return _assemble(c, ranks, "z", torsion)
