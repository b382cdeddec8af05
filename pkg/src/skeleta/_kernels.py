"""Hot integer kernels.

Each kernel has a numba ``@njit`` implementation and a pure-numpy twin with
the same signature. The numba path is used when numba imports cleanly and
``SKELETA_DISABLE_NUMBA`` is unset (or ``0``); otherwise the numpy path.

Both paths operate on ``int64`` arrays and are exact as long as callers keep
to the documented bounds (primes below 2**31, box-count values below 2**62).
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "rank_mod_p", "box_counts", "numpy_impl", "numba_impl"]


# ---------------------------------------------------------------- numpy path


def _rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    m = np.mod(a, p).astype(np.int64)
    nrows, ncols = m.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        below = r + 1 + np.flatnonzero(m[r + 1 :, c])
        if below.size:
            f = m[below, c][:, None]
            m[below] = (m[below] - f * m[r][None, :]) % p
        r += 1
    return r


def _box_counts_numpy(normals, offsets, lo, hi) -> tuple[int, int]:
    d = lo.shape[0]
    interior = boundary = 0
    if d == 0:
        return 0, 0
    # one slab per value of the first coordinate keeps memory bounded
    rest = tuple(int(h - l + 1) for l, h in zip(lo[1:], hi[1:]))
    if rest:
        tail = np.indices(rest, dtype=np.int64).reshape(d - 1, -1).T + lo[1:]
    else:
        tail = np.zeros((1, 0), dtype=np.int64)
    for x0 in range(int(lo[0]), int(hi[0]) + 1):
        pts = np.empty((tail.shape[0], d), dtype=np.int64)
        pts[:, 0] = x0
        pts[:, 1:] = tail
        vals = pts @ normals.T + offsets
        inside = np.all(vals >= 0, axis=1)
        strict = np.all(vals > 0, axis=1)
        interior += int(strict.sum())
        boundary += int((inside & ~strict).sum())
    return interior, boundary


numpy_impl = {"rank_mod_p": _rank_mod_p_numpy, "box_counts": _box_counts_numpy}


# ---------------------------------------------------------------- numba path

numba_impl: dict = {}

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

if njit is not None:

    @njit(cache=True)
    def _inv_mod(x, p):
        t, new_t = 0, 1
        r, new_r = p, x
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @njit(cache=True)
    def _rank_mod_p_numba(a, p):
        nrows, ncols = a.shape
        m = np.empty((nrows, ncols), dtype=np.int64)
        for i in range(nrows):
            for j in range(ncols):
                v = a[i, j] % p
                m[i, j] = v + p if v < 0 else v
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if m[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    tmp = m[r, j]
                    m[r, j] = m[piv, j]
                    m[piv, j] = tmp
            inv = _inv_mod(m[r, c], p)
            for j in range(c, ncols):
                m[r, j] = (m[r, j] * inv) % p
            for i in range(r + 1, nrows):
                f = m[i, c]
                if f != 0:
                    for j in range(c, ncols):
                        v = (m[i, j] - f * m[r, j]) % p
                        m[i, j] = v + p if v < 0 else v
            r += 1
        return r

    @njit(cache=True)
    def _box_counts_numba_impl(normals, offsets, lo, hi):
        d = lo.shape[0]
        nf = normals.shape[0]
        interior = 0
        boundary = 0
        if d == 0:
            return 0, 0
        x = lo.copy()
        while True:
            inside = True
            strict = True
            for f in range(nf):
                v = offsets[f]
                for k in range(d):
                    v += normals[f, k] * x[k]
                if v < 0:
                    inside = False
                    break
                if v == 0:
                    strict = False
            if inside:
                if strict:
                    interior += 1
                else:
                    boundary += 1
            # odometer increment, last coordinate fastest
            k = d - 1
            while k >= 0:
                x[k] += 1
                if x[k] <= hi[k]:
                    break
                x[k] = lo[k]
                k -= 1
            if k < 0:
                break
        return interior, boundary

    def _box_counts_numba(normals, offsets, lo, hi) -> tuple[int, int]:
        i, b = _box_counts_numba_impl(normals, offsets, lo, hi)
        return int(i), int(b)

    def _rank_mod_p_numba_entry(a, p) -> int:
        return int(_rank_mod_p_numba(np.ascontiguousarray(a, dtype=np.int64), np.int64(p)))

    numba_impl = {"rank_mod_p": _rank_mod_p_numba_entry, "box_counts": _box_counts_numba}


def _use_numba() -> bool:
    flag = os.environ.get("SKELETA_DISABLE_NUMBA", "").strip().lower()
    return bool(numba_impl) and flag in ("", "0", "false", "no")


BACKEND = "numba" if _use_numba() else "numpy"
_impl = numba_impl if BACKEND == "numba" else numpy_impl


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an ``int64`` matrix over ``GF(p)``; ``p`` must be a prime < 2**31."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return _impl["rank_mod_p"](a, p)


def box_counts(normals, offsets, lo, hi) -> tuple[int, int]:
    """Count lattice points of the box ``[lo, hi]`` in a polytope.

    The polytope is ``{x : normals @ x + offsets >= 0}``. Returns
    ``(interior, boundary)``: points with every inequality strict, and points
    inside with at least one equality.
    """
    return _impl["box_counts"](
        np.ascontiguousarray(normals, dtype=np.int64),
        np.ascontiguousarray(offsets, dtype=np.int64),
        np.ascontiguousarray(lo, dtype=np.int64),
        np.ascontiguousarray(hi, dtype=np.int64),
    )


def warm_up() -> None:
    """Load compiled kernels now, so forked workers inherit them."""
    rank_mod_p(np.eye(2, dtype=np.int64), 3)
    box_counts([[1], [-1]], [1, 1], [-1], [1])
