"""Stacky-fan combinatorics of the Legendrian skeleton.

For a proper face ``F`` of a reflexive facet-simplicial polytope with vertex
matrix ``A`` (rows are the vertices of ``F``), the face group is

    G_F = {m in R^d : A m in Z^|F|} / Z^d.

A Smith decomposition ``U A V = S`` identifies it with
``(R/Z)^s x Z/s_1 x ... x Z/s_r`` where ``s = d - |F|``. The identity
component is a torus with first homology ``M_F = ker A`` (as a lattice), and
the component group ``P_F`` is the product of the cyclic factors.

For ``F`` contained in ``F'`` the group of ``F'`` sits inside the group of
``F``; :func:`attaching_map` records that inclusion on ``M`` lattices and on
component groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from .exactla import IntMatrix, SmithDecomposition, integer_kernel, smith_normal_form, solve_integral
from .polytope import (
    Face,
    LatticePolytope,
    _require_reflexive_simplicial,
    enumerate_faces,
)


@dataclass(frozen=True)
class StackyFan:
    """Fan over the faces of the polytope; rays are its vertices as given."""

    rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[Face, ...]

    def cone_generators(self, f: Face) -> tuple[tuple[int, ...], ...]:
        return tuple(self.rays[i] for i in f.vertex_indices)


def stacky_fan(p: LatticePolytope) -> StackyFan:
    lattice = enumerate_faces(p)
    return StackyFan(p.ambient_rank, p.vertices, tuple(lattice.all_faces()))


@dataclass(frozen=True)
class FaceGroupData:
    face: Face
    vertex_matrix: IntMatrix
    snf: SmithDecomposition
    mf_basis: IntMatrix

    @property
    def ambient_rank(self) -> int:
        return self.vertex_matrix.cols

    @property
    def torus_rank(self) -> int:
        return self.ambient_rank - len(self.face.vertex_indices)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.snf.invariant_factors

    @property
    def moduli(self) -> tuple[int, ...]:
        """Orders of the nontrivial cyclic factors of the component group."""
        return tuple(x for x in self.invariant_factors if x != 1)

    @property
    def component_order(self) -> int:
        out = 1
        for x in self.invariant_factors:
            out *= x
        return out

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Elements of the component group, lexicographically."""
        return tuple(product(*(range(x) for x in self.moduli)))

    @cached_property
    def _component_index(self) -> dict[tuple[int, ...], int]:
        return {k: i for i, k in enumerate(self.components)}

    def component_index(self, k: tuple[int, ...]) -> int:
        return self._component_index[k]

    def lift(self, k: Sequence[int]) -> tuple[Fraction, ...]:
        """A rational representative ``m`` of component ``k``."""
        if len(k) != len(self.moduli):
            raise ValueError(f"component {k!r} does not match moduli {self.moduli}")
        it = iter(k)
        y = [Fraction(0)] * self.ambient_rank
        for i, s in enumerate(self.invariant_factors):
            if s != 1:
                y[i] = Fraction(next(it) % s, s)
        v = self.snf.v.tolist()
        return tuple(sum((v[a][b] * y[b] for b in range(len(y))), Fraction(0)) for a in range(len(v)))

    def component_of(self, m: Sequence[Fraction]) -> tuple[int, ...]:
        """Component of the point ``m`` of this group (``A m`` must be integral)."""
        am = [sum((Fraction(a) * x for a, x in zip(row, m)), Fraction(0)) for row in self.vertex_matrix.tolist()]
        if any(x.denominator != 1 for x in am):
            raise ValueError(f"{tuple(m)} is not in the face group of {self.face}")
        w = [sum(u * int(x) for u, x in zip(row, am)) for row in self.snf.u.tolist()]
        return tuple(w[i] % s for i, s in enumerate(self.invariant_factors) if s != 1)

    def contains(self, m: Sequence[Fraction]) -> bool:
        return all(
            sum((Fraction(a) * x for a, x in zip(row, m)), Fraction(0)).denominator == 1
            for row in self.vertex_matrix.tolist()
        )


@dataclass(frozen=True)
class AttachingMap:
    """Inclusion of the group of ``source`` (larger face) into that of ``target``.

    ``torus_map`` satisfies ``target.mf_basis @ torus_map == source.mf_basis``;
    ``component_images[i]`` is the image of ``source.components[i]``.
    """

    source: Face
    target: Face
    torus_map: IntMatrix
    component_images: tuple[tuple[int, ...], ...]
    source_components: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def component_map(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        return dict(zip(self.source_components, self.component_images))


def face_group_from_matrix(face: Face, a: IntMatrix, mf_basis: IntMatrix | None = None) -> FaceGroupData:
    snf = smith_normal_form(a)
    if snf.rank != a.rows:
        raise ValueError(f"vertex matrix of {face} is not of full row rank")
    if mf_basis is None:
        mf_basis = integer_kernel(a)
    return FaceGroupData(face, a, snf, mf_basis)


def _check_face(p: LatticePolytope, f: Face) -> None:
    s = set(f.vertex_indices)
    if not s or not any(s <= set(fc.vertex_indices) for fc in p.facets):
        raise ValueError(f"{f} is not a proper face of the polytope")


def face_group(p: LatticePolytope, f: Face) -> FaceGroupData:
    """Smith data, torus rank, component group and ``M_F`` basis of a face."""
    _require_reflexive_simplicial(p)
    _check_face(p, f)
    return face_group_from_matrix(f, p.vertex_matrix(f.vertex_indices))


def inclusion_map(small: FaceGroupData, big: FaceGroupData) -> AttachingMap:
    """Attaching data for ``small.face`` contained in ``big.face``."""
    if not set(small.face.vertex_indices) < set(big.face.vertex_indices):
        raise ValueError(f"{small.face} is not a proper subface of {big.face}")
    if big.torus_rank:
        t = solve_integral(small.mf_basis, big.mf_basis)
    else:
        t = IntMatrix.zeros(small.torus_rank, 0)
    images = tuple(small.component_of(big.lift(k)) for k in big.components)
    return AttachingMap(big.face, small.face, t, images, big.components)


def attaching_map(p: LatticePolytope, f: Face, f_prime: Face) -> AttachingMap:
    """Attaching data for faces ``f`` contained in ``f_prime``.

    Normally ``f`` has codimension one in ``f_prime``; larger codimension is
    accepted and gives the direct map along the flag.
    """
    return inclusion_map(face_group(p, f), face_group(p, f_prime))


def strata(p: LatticePolytope) -> list[tuple[Face, FaceGroupData]]:
    """One ``(face, group)`` pair per proper face, in face-lattice order."""
    _require_reflexive_simplicial(p)
    lattice = enumerate_faces(p)
    return [(f, face_group_from_matrix(f, p.vertex_matrix(f.vertex_indices))) for f in lattice.all_faces()]


def chart(p: LatticePolytope, f: Face) -> list[Face]:
    """Faces containing ``f``: the strata of the open chart attached to ``f``."""
    _check_face(p, f)
    return enumerate_faces(p).star(f)
