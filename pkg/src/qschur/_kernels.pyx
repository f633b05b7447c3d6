# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p elimination kernels.  Same API as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline i64 _inv(i64 a, i64 p) noexcept nogil:
    # Fermat inverse; p is prime and small
    cdef i64 r = 1, b = a % p, e = p - 2
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


cdef int _eliminate(i64[:, ::1] m, int rows, int cols, i64 p, int* pivots) noexcept nogil:
    """Reduced row echelon form in place on the leading ``rows`` rows; returns rank."""
    cdef int r = 0, c, i, j, piv
    cdef i64 inv, f
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, c] % p != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                f = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = f
        inv = _inv(((m[r, c] % p) + p) % p, p)
        for j in range(cols):
            m[r, j] = (((m[r, j] * inv) % p) + p) % p
        for i in range(rows):
            if i != r:
                f = ((m[i, c] % p) + p) % p
                if f != 0:
                    for j in range(cols):
                        m[i, j] = (((m[i, j] - f * m[r, j]) % p) + p) % p
        pivots[r] = c
        r += 1
    return r


def rank_mod_p(mat, int p):
    arr = np.array(mat, dtype=np.int64, order="C", ndmin=2)
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        return 0
    cdef i64[:, ::1] m = arr
    cdef int[64] piv
    return _eliminate(m, m.shape[0], m.shape[1], p, piv)


def rref_mod_p(mat, int p):
    """Return ``(rows, pivots)``: nonzero RREF rows as tuples and their pivot columns."""
    arr = np.array(mat, dtype=np.int64, order="C", ndmin=2)
    if arr.shape[0] == 0 or arr.size == 0:
        return (), ()
    cdef i64[:, ::1] m = arr
    cdef int[64] piv
    cdef int r = _eliminate(m, m.shape[0], m.shape[1], p, piv)
    cdef int i
    rows = []
    pivots = []
    for i in range(r):
        rows.append(tuple(arr[i].tolist()))
        pivots.append(piv[i])
    return tuple(rows), tuple(pivots)


def intersection_dims(basis_a, dims_a, basis_b, dims_b, int p):
    """``out[i, j] = dim(A_i ∩ B_j)`` where ``A_i`` is spanned by the first
    ``dims_a[i]`` rows of ``basis_a`` (likewise for ``B``)."""
    cdef i64[:, ::1] a = np.array(basis_a, dtype=np.int64, order="C", ndmin=2)
    cdef i64[:, ::1] b = np.array(basis_b, dtype=np.int64, order="C", ndmin=2)
    cdef int na = len(dims_a), nb = len(dims_b)
    cdef int cols = a.shape[1]
    out_arr = np.zeros((na, nb), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64[:, ::1] w = np.zeros((a.shape[0] + b.shape[0] + 1, cols), dtype=np.int64)
    cdef int i, j, r, c, da, db, rk
    cdef int[64] piv
    for i in range(na):
        da = dims_a[i]
        for j in range(nb):
            db = dims_b[j]
            if da == 0 or db == 0:
                out[i, j] = 0
                continue
            for r in range(da):
                for c in range(cols):
                    w[r, c] = a[r, c]
            for r in range(db):
                for c in range(cols):
                    w[da + r, c] = b[r, c]
            rk = _eliminate(w, da + db, cols, p, piv)
            out[i, j] = da + db - rk
    return out_arr
