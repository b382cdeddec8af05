"""Exact integer and rational linear algebra.

Everything here works on Python integers (numpy ``object`` arrays under the
hood), so nothing overflows. Matrices are small at desk scale; clarity wins
over asymptotics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from sympy import prevprime

from . import _kernels


class LinAlgError(ValueError):
    pass


class InconsistentSystemError(LinAlgError):
    """``a @ x = b`` has no rational solution."""


class RankDeficientError(LinAlgError):
    """``a @ x = b`` is consistent but ``a`` lacks full column rank."""


class IntMatrix:
    """Immutable integer matrix with arbitrary-precision entries.

    Entries are stored row-major in a read-only ``object`` array of Python
    ints. Zero-row and zero-column shapes are allowed.
    """

    __slots__ = ("_a",)

    def __init__(self, data, shape: tuple[int, int] | None = None):
        if isinstance(data, IntMatrix):
            a = data._a
        else:
            a = np.array(data, dtype=object)
            if shape is not None:
                a = a.reshape(shape)
            elif a.ndim == 1 and a.size == 0:
                a = a.reshape(0, 0)
            if a.ndim != 2:
                raise ValueError(f"expected a 2-d array, got shape {a.shape}")
            a = np.vectorize(_as_int, otypes=[object])(a) if a.size else a
        a = a.copy()
        a.flags.writeable = False
        self._a = a

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(np.zeros((rows, cols), dtype=object))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        a = np.zeros((n, n), dtype=object)
        for i in range(n):
            a[i, i] = 1
        return cls(a)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(self._a.flat)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self._a.T)

    def array(self) -> np.ndarray:
        """Writable ``object`` copy."""
        return self._a.copy()

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._a]

    def to_int64(self) -> np.ndarray:
        if self._a.size and max(abs(x) for x in self._a.flat) >= 2**62:
            raise OverflowError("entries do not fit in int64")
        return self._a.astype(np.int64)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._a.flat)

    def det(self) -> int:
        if self.rows != self.cols:
            raise LinAlgError("determinant of a non-square matrix")
        return bareiss_det(self.tolist())

    def __getitem__(self, key):
        out = self._a[key]
        if isinstance(out, np.ndarray):
            if out.ndim == 2:
                return IntMatrix(out)
            return tuple(out)
        return out

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix(self._a.dot(other._a))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(-self._a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, shape={self.shape})"


def _as_int(x) -> int:
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not integer matrix entries")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    raise TypeError(f"non-integer matrix entry {x!r}")


def as_intmatrix(a, shape: tuple[int, int] | None = None) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix(a, shape)


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ a @ v == s`` with ``u``, ``v`` unimodular and ``s`` in Smith form."""

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _snf_core(a: list[list[int]], m: int, n: int, track: bool):
    """In-place diagonalization of ``a`` (list of rows).

    Returns ``(u, v)`` as row lists when ``track`` (else ``None, None``),
    with ``u @ a_orig @ v`` equal to the final ``a``.
    """
    u = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    # v is kept transposed so column operations become row operations
    vt = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def row_axpy(t, src, c, mats):
        # row t += c * row src
        for mat in mats:
            rt, rs = mat[t], mat[src]
            for j, x in enumerate(rs):
                if x:
                    rt[j] += c * x

    def col_axpy(t, src, c):
        # col t += c * col src
        for row in a:
            x = row[src]
            if x:
                row[t] += c * x
        if track:
            rt, rs = vt[t], vt[src]
            for j, x in enumerate(rs):
                if x:
                    rt[j] += c * x

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if track:
            u[i], u[k] = u[k], u[i]

    def swap_cols(i, k):
        for row in a:
            row[i], row[k] = row[k], row[i]
        if track:
            vt[i], vt[k] = vt[k], vt[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if track:
            u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        # minimal-absolute-value pivot in the trailing block
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // p
                    row_axpy(i, t, -q, [a, u] if track else [a])
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    col_axpy(j, t, -(x // p))
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # enforce divisibility against the rest of the block
                bad = None
                for i in range(t + 1, m):
                    row = a[i]
                    for j in range(t + 1, n):
                        if row[j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_axpy(t, bad, 1, [a, u] if track else [a])
                continue
            # move the smallest remaining entry of row/col t onto the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                x = a[i][t]
                if x and abs(x) < best[0]:
                    best = (abs(x), i, t)
            for j in range(t + 1, n):
                x = a[t][j]
                if x and abs(x) < best[0]:
                    best = (abs(x), t, j)
            _, bi, bj = best
            if bi != t:
                swap_rows(bi, t)
            if bj != t:
                swap_cols(bj, t)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    if track:
        v = [list(col) for col in zip(*vt)] if n else []
        return u, v
    return None, None


def smith_normal_form(a) -> SmithDecomposition:
    """Smith normal form with transformation matrices.

    Args:
        a: an :class:`IntMatrix` or anything it accepts.

    Returns:
        A :class:`SmithDecomposition` ``(u, s, v)`` with ``u @ a @ v == s``.
    """
    a = as_intmatrix(a)
    m, n = a.shape
    work = a.tolist()
    u, v = _snf_core(work, m, n, track=True)
    factors = tuple(work[i][i] for i in range(min(m, n)) if work[i][i])
    return SmithDecomposition(
        u=IntMatrix(u, (m, m)),
        s=IntMatrix(work, (m, n)),
        v=IntMatrix(v, (n, n)),
        invariant_factors=factors,
    )


def invariant_factors(a) -> tuple[int, ...]:
    """Nonzero Smith diagonal, without building the transforms."""
    a = as_intmatrix(a)
    m, n = a.shape
    work = [r for r in a.tolist() if any(r)]
    _snf_core(work, len(work), n, track=False)
    return tuple(work[i][i] for i in range(min(len(work), n)) if work[i][i])


def integer_kernel(a) -> IntMatrix:
    """Columns form a saturated ℤ-basis of ``{x in ℤ^n : a @ x = 0}``."""
    a = as_intmatrix(a)
    n = a.cols
    snf = smith_normal_form(a)
    r = snf.rank
    v = snf.v.array()
    return IntMatrix(v[:, r:], (n, n - r))


def gcd_of_minors(a, k: int) -> int:
    """gcd of all ``k x k`` minors, by enumeration."""
    a = as_intmatrix(a)
    rows = a.tolist()
    g = 0
    for ri in combinations(range(a.rows), k):
        for ci in combinations(range(a.cols), k):
            g = math.gcd(g, bareiss_det([[rows[i][j] for j in ci] for i in ri]))
            if g == 1:
                return 1
    return g


# --------------------------------------------------------------------------
# Exterior powers


def wedge_matrix(t, r: int) -> IntMatrix:
    """Matrix of the induced map on r-th exterior powers.

    Rows are indexed by r-subsets of the row range, columns by r-subsets of
    the column range, both in lexicographic order; each entry is the
    corresponding r x r minor.
    """
    t = as_intmatrix(t)
    m, n = t.shape
    if not 0 <= r <= min(m, n):
        raise ValueError(f"wedge degree {r} out of range for a {m}x{n} matrix")
    rsets = list(combinations(range(m), r))
    csets = list(combinations(range(n), r))
    rows = t.tolist()
    out = [
        [bareiss_det([[rows[i][j] for j in cs] for i in rs]) for cs in csets]
        for rs in rsets
    ]
    return IntMatrix(out, (len(rsets), len(csets)))


# --------------------------------------------------------------------------
# Rational elimination


def _row_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pk = m[r][c]
        for i in range(r + 1, len(m)):
            mic = m[i][c]
            ri, rr = m[i], m[r]
            for j in range(c, ncols):
                ri[j] = (ri[j] * pk - mic * rr[j]) // prev
        prev = pk
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank_q(a) -> int:
    """Rank over ℚ by fraction-free Gaussian elimination."""
    a = as_intmatrix(a)
    if a.rows == 0 or a.cols == 0:
        return 0
    _, pivots = _row_echelon(a.tolist())
    return len(pivots)


def solve_exact(a, b, allow_free: bool = False) -> list[list[Fraction]]:
    """Solve ``a @ x = b`` over ℚ.

    Raises:
        InconsistentSystemError: no solution exists.
        RankDeficientError: the solution is not unique and ``allow_free`` is
            false. With ``allow_free`` the particular solution with all free
            variables zero is returned.
    """
    a = as_intmatrix(a)
    b = as_intmatrix(b)
    if a.rows != b.rows:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    n, k = a.cols, b.cols
    aug = [list(ra) + list(rb) for ra, rb in zip(a.tolist(), b.tolist())]
    m = [[Fraction(x) for x in row] for row in aug]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(m)):
        if any(m[i][n + j] != 0 for j in range(k)):
            raise InconsistentSystemError("system has no solution")
    if r < n and not allow_free:
        raise RankDeficientError(f"rank {r} < {n} columns; solution not unique")
    x = [[Fraction(0)] * k for _ in range(n)]
    for i, c in enumerate(pivots):
        x[c] = m[i][n:]
    return x


def solve_integral(a, b) -> IntMatrix:
    """Unique solution of ``a @ x = b``, required to be integral."""
    x = solve_exact(a, b)
    a = as_intmatrix(a)
    b = as_intmatrix(b)
    out = []
    for row in x:
        if any(v.denominator != 1 for v in row):
            raise LinAlgError("solution is not integral")
        out.append([int(v) for v in row])
    return IntMatrix(out, (a.cols, b.cols))


def hstack(blocks: Iterable[IntMatrix], rows: int) -> IntMatrix:
    arrs = [blk.array() for blk in blocks]
    if not arrs:
        return IntMatrix.zeros(rows, 0)
    return IntMatrix(np.hstack(arrs), (rows, sum(x.shape[1] for x in arrs)))


# --------------------------------------------------------------------------
# Multi-modular rank


@lru_cache(maxsize=None)
def _prime(i: int) -> int:
    """The i-th prime below 2**31, counting downward."""
    return prevprime(2**31 if i == 0 else _prime(i - 1))


def _hadamard_sq(sq_norms: list[int], k: int) -> int:
    """Squared bound on every nonzero minor of size <= k.

    Zero columns never enter a nonzero minor and the rest have norm >= 1,
    hence the clamp.
    """
    out = 1
    for x in sorted(sq_norms, reverse=True)[:k]:
        out *= max(x, 1)
    return out


def rank_multimodular(a) -> int:
    """Exact rank over ℚ from ranks modulo several word-size primes.

    ``rank mod p <= rank over ℚ`` for every p, and a drop at p means p
    divides every maximal nonvanishing minor. Once the product of the primes
    tried exceeds the Hadamard bound on those minors, the largest modular
    rank seen is the rational rank.
    """
    a = as_intmatrix(a)
    m, n = a.shape
    k = min(m, n)
    if k == 0:
        return 0
    arr = a.array()
    col_sq = [sum(x * x for x in arr[:, j]) for j in range(n)]
    row_sq = [sum(x * x for x in arr[i, :]) for i in range(m)]
    if not any(col_sq):
        return 0
    bound_sq = min(_hadamard_sq(col_sq, k), _hadamard_sq(row_sq, k))
    best = 0
    prod = 1
    i = 0
    while prod * prod <= bound_sq:
        p = _prime(i)
        reduced = np.mod(arr, p).astype(np.int64)
        best = max(best, _kernels.rank_mod_p(reduced, p))
        if best == k:
            break
        prod *= p
        i += 1
    return best
