"""Lattice polytopes: hulls, polar duality, simplicial face lattices, volumes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .exactla import IntMatrix, bareiss_det, rank_q


class PolytopeError(ValueError):
    pass


class InvalidPolytopeError(PolytopeError):
    pass


class OriginNotInteriorError(PolytopeError):
    pass


class NotLatticePolytopeError(PolytopeError):
    def __init__(self, vertex: tuple[Fraction, ...]):
        self.vertex = vertex
        shown = ", ".join(str(x) for x in vertex)
        super().__init__(f"polar dual has non-lattice vertex ({shown})")


class NotReflexiveError(PolytopeError):
    pass


class NotFacetSimplicialError(PolytopeError):
    pass


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane ``normal . x + offset >= 0`` with equality on the facet.

    ``normal`` is a primitive integer vector.
    """

    normal: tuple[int, ...]
    offset: int
    vertex_indices: tuple[int, ...]


def _hyperplane(points: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], int] | None:
    """Primitive normal and offset of the affine span of d points in ℤ^d."""
    p0 = points[0]
    d = len(p0)
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    normal = []
    for j in range(d):
        minor = [row[:j] + row[j + 1 :] for row in diffs]
        normal.append((-1) ** j * bareiss_det(minor))
    g = math.gcd(*normal)
    if g == 0:
        return None
    normal = [x // g for x in normal]
    return tuple(normal), -sum(a * b for a, b in zip(normal, p0))


def _affine_dim(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    return rank_q(IntMatrix(diffs, (len(diffs), len(p0)))) if diffs else 0


def _facets_of(points: Sequence[tuple[int, ...]]) -> list[Facet]:
    """All facets of conv(points) by brute force over d-subsets."""
    d = len(points[0])
    found: dict[tuple[tuple[int, ...], int], Facet] = {}
    for subset in combinations(range(len(points)), d):
        hp = _hyperplane([points[i] for i in subset])
        if hp is None:
            continue
        normal, offset = hp
        if (normal, offset) in found or (tuple(-x for x in normal), -offset) in found:
            continue
        vals = [sum(a * b for a, b in zip(normal, p)) + offset for p in points]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            normal, offset = tuple(-x for x in normal), -offset
        else:
            continue
        on = tuple(i for i, v in enumerate(vals) if v == 0)
        found[(normal, offset)] = Facet(normal, offset, on)
    return sorted(found.values(), key=lambda f: (f.vertex_indices, f.normal))


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope given by its vertex list.

    The list must be exactly the vertex set of the hull: no repeats and no
    redundant points. Use :meth:`from_points` to build from arbitrary points.
    """

    vertices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        verts = tuple(tuple(int(x) for x in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise InvalidPolytopeError("empty vertex list")
        d = len(verts[0])
        if d == 0 or any(len(v) != d for v in verts):
            raise InvalidPolytopeError("vertices must be nonempty vectors of equal length")
        if len(set(verts)) != len(verts):
            raise InvalidPolytopeError("duplicate vertex")
        if _affine_dim(verts) != d:
            raise InvalidPolytopeError(f"hull is not full-dimensional in Z^{d}")
        active = [[] for _ in verts]
        for f in self.facets:
            for i in f.vertex_indices:
                active[i].append(f.normal)
        for i, normals in enumerate(active):
            if not normals or rank_q(IntMatrix(normals)) != d:
                raise InvalidPolytopeError(f"point {verts[i]} is not a vertex of the hull")

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> LatticePolytope:
        pts = sorted(set(tuple(int(x) for x in p) for p in points))
        if not pts:
            raise InvalidPolytopeError("empty point set")
        d = len(pts[0])
        if _affine_dim(pts) != d:
            raise InvalidPolytopeError(f"hull is not full-dimensional in Z^{d}")
        facets = _facets_of(pts)
        keep = []
        for i, p in enumerate(pts):
            normals = [f.normal for f in facets if i in f.vertex_indices]
            if normals and rank_q(IntMatrix(normals)) == d:
                keep.append(p)
        return cls(tuple(keep))

    @property
    def ambient_rank(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        return tuple(_facets_of(self.vertices))

    def vertex_matrix(self, indices: Sequence[int]) -> IntMatrix:
        return IntMatrix([self.vertices[i] for i in indices], (len(indices), self.ambient_rank))

    def origin_interior(self) -> bool:
        return all(f.offset > 0 for f in self.facets)

    def transform(self, w) -> LatticePolytope:
        """Image under ``v -> v @ w`` (rows are vertices)."""
        w = w if isinstance(w, IntMatrix) else IntMatrix(w)
        img = self.vertex_matrix(range(len(self.vertices))) @ w
        return LatticePolytope(tuple(tuple(r) for r in img.tolist()))


def polar_dual(p: LatticePolytope) -> LatticePolytope:
    """``{y : <y, x> >= -1 for all x in p}``, vertices sorted lexicographically.

    Raises:
        OriginNotInteriorError: the origin is not strictly inside ``p``.
        NotLatticePolytopeError: some dual vertex is not integral.
    """
    if not p.origin_interior():
        raise OriginNotInteriorError("origin is not in the interior")
    verts = []
    for f in p.facets:
        v = tuple(Fraction(a, f.offset) for a in f.normal)
        if any(x.denominator != 1 for x in v):
            raise NotLatticePolytopeError(v)
        verts.append(tuple(int(x) for x in v))
    return LatticePolytope(tuple(sorted(verts)))


def is_reflexive(p: LatticePolytope) -> bool:
    return all(f.offset == 1 for f in p.facets)


def is_facet_simplicial(p: LatticePolytope) -> bool:
    d = p.ambient_rank
    return all(len(f.vertex_indices) == d for f in p.facets)


def is_vertex_simplicial(p: LatticePolytope) -> bool:
    # the dual is facet-simplicial exactly when every vertex lies on d facets
    d = p.ambient_rank
    counts = [0] * len(p.vertices)
    for f in p.facets:
        for i in f.vertex_indices:
            counts[i] += 1
    return all(c == d for c in counts)


# --------------------------------------------------------------------------
# Face lattice


@dataclass(frozen=True, order=True)
class Face:
    """A proper face, identified by its sorted vertex indices."""

    dim: int
    vertex_indices: tuple[int, ...]

    @classmethod
    def of(cls, indices: Iterable[int]) -> Face:
        idx = tuple(sorted(indices))
        return cls(len(idx) - 1, idx)

    def __contains__(self, other: Face) -> bool:
        return set(other.vertex_indices) <= set(self.vertex_indices)


def simplicial_sign(f: Face, f_prime: Face) -> int:
    """``(-1)**i`` where ``f`` omits the i-th vertex of ``f_prime``."""
    missing = [i for i, v in enumerate(f_prime.vertex_indices) if v not in f.vertex_indices]
    if len(missing) != 1 or f.dim != f_prime.dim - 1:
        raise ValueError(f"{f} is not a codimension-one face of {f_prime}")
    return -1 if missing[0] % 2 else 1


class FaceLattice:
    """Proper faces of a facet-simplicial polytope with oriented incidences."""

    def __init__(self, facets: Sequence[tuple[int, ...]], ambient_rank: int):
        seen: set[tuple[int, ...]] = set()
        for fv in facets:
            for k in range(1, len(fv) + 1):
                seen.update(combinations(sorted(fv), k))
        by_dim: list[list[Face]] = [[] for _ in range(ambient_rank)]
        for idx in sorted(seen):
            by_dim[len(idx) - 1].append(Face.of(idx))
        self.faces: tuple[tuple[Face, ...], ...] = tuple(tuple(fs) for fs in by_dim)
        self._index = {f: i for fs in self.faces for i, f in enumerate(fs)}
        self.incidences: list[tuple[Face, Face, int]] = []
        self._sub: dict[Face, list[tuple[Face, int]]] = {}
        self._sup: dict[Face, list[Face]] = {f: [] for f in self._index}
        for fs in self.faces[1:]:
            for fp in fs:
                subs = []
                for i in range(len(fp.vertex_indices)):
                    f = Face.of(fp.vertex_indices[:i] + fp.vertex_indices[i + 1 :])
                    eps = -1 if i % 2 else 1
                    subs.append((f, eps))
                    self.incidences.append((f, fp, eps))
                    self._sup[f].append(fp)
                self._sub[fp] = subs

    @property
    def dim(self) -> int:
        return len(self.faces)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self.faces)

    def all_faces(self) -> list[Face]:
        return [f for fs in self.faces for f in fs]

    def index(self, f: Face) -> int:
        """Position of ``f`` among the faces of its dimension."""
        return self._index[f]

    def __contains__(self, f: Face) -> bool:
        return f in self._index

    def boundary(self, f_prime: Face) -> list[tuple[Face, int]]:
        """Codimension-one subfaces of ``f_prime`` with their signs."""
        return list(self._sub.get(f_prime, []))

    def cofaces(self, f: Face) -> list[Face]:
        """Faces containing ``f`` in codimension one."""
        return list(self._sup[f])

    def sign(self, f: Face, f_prime: Face) -> int:
        for g, eps in self._sub.get(f_prime, []):
            if g == f:
                return eps
        raise ValueError(f"{f} is not a codimension-one face of {f_prime}")

    def star(self, f: Face) -> list[Face]:
        """All faces containing ``f``, in lattice order."""
        s = set(f.vertex_indices)
        return [g for g in self.all_faces() if s <= set(g.vertex_indices)]


def _require_reflexive_simplicial(p: LatticePolytope) -> None:
    if not p.origin_interior() or not is_reflexive(p):
        raise NotReflexiveError("polytope is not reflexive")
    if not is_facet_simplicial(p):
        raise NotFacetSimplicialError("polytope is not facet-simplicial")


def enumerate_faces(p: LatticePolytope) -> FaceLattice:
    """Face lattice of a reflexive facet-simplicial polytope.

    Faces are all nonempty subsets of facet vertex sets. The incidence sign
    of ``F`` in ``F'`` is ``(-1)**i`` where ``F`` drops the i-th vertex of
    ``F'`` in sorted order.
    """
    _require_reflexive_simplicial(p)
    return FaceLattice([f.vertex_indices for f in p.facets], p.ambient_rank)


# --------------------------------------------------------------------------
# Lattice points and volume


def _bounding_box(p: LatticePolytope) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array(p.vertices, dtype=object)
    return arr.min(axis=0), arr.max(axis=0)


def _box_counts_python(p: LatticePolytope, lo, hi) -> tuple[int, int]:
    interior = boundary = 0
    for x in product(*(range(int(a), int(b) + 1) for a, b in zip(lo, hi))):
        vals = [sum(a * b for a, b in zip(f.normal, x)) + f.offset for f in p.facets]
        if all(v >= 0 for v in vals):
            if all(v > 0 for v in vals):
                interior += 1
            else:
                boundary += 1
    return interior, boundary


def lattice_points(p: LatticePolytope) -> tuple[int, int]:
    """``(interior, boundary)`` lattice point counts by box enumeration."""
    lo, hi = _bounding_box(p)
    normals = [f.normal for f in p.facets]
    offsets = [f.offset for f in p.facets]
    extent = max(max(abs(int(a)), abs(int(b))) for a, b in zip(lo, hi))
    worst = max(sum(abs(x) for x in n) * extent + abs(o) for n, o in zip(normals, offsets))
    if worst >= 2**62:
        return _box_counts_python(p, lo, hi)
    return _kernels.box_counts(
        np.array(normals, dtype=np.int64),
        np.array(offsets, dtype=np.int64),
        np.array(lo, dtype=np.int64),
        np.array(hi, dtype=np.int64),
    )


def _triangulate(p: LatticePolytope, vs: frozenset[int], dim: int) -> list[tuple[int, ...]]:
    """Pulling triangulation of the face with vertex set ``vs``."""
    if len(vs) == dim + 1:
        return [tuple(sorted(vs))]
    apex = min(vs)
    subfaces = set()
    for f in p.facets:
        g = vs & frozenset(f.vertex_indices)
        if apex in g or g in subfaces or len(g) < dim:
            continue
        if _affine_dim([p.vertices[i] for i in sorted(g)]) == dim - 1:
            subfaces.add(g)
    out = []
    for g in sorted(subfaces, key=sorted):
        for simplex in _triangulate(p, g, dim - 1):
            out.append(tuple(sorted(simplex + (apex,))))
    return out


def normalized_volume(p: LatticePolytope) -> int:
    """``d!`` times the Euclidean volume.

    Sums ``|det|`` over the cones from the origin to a triangulation of each
    facet; when the origin is not interior the first vertex is the apex.
    """
    d = p.ambient_rank
    if p.origin_interior():
        apex = (0,) * d
        skip = None
    else:
        apex = p.vertices[0]
        skip = 0
    total = 0
    for f in p.facets:
        if skip is not None and skip in f.vertex_indices:
            continue
        for simplex in _triangulate(p, frozenset(f.vertex_indices), d - 1):
            rows = [[a - b for a, b in zip(p.vertices[i], apex)] for i in simplex]
            total += abs(bareiss_det(rows))
    return total
