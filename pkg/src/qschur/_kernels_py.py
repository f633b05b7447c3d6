"""Pure-Python mod-p elimination; the fallback for the compiled ``_kernels``."""

from __future__ import annotations

import numpy as np


def _eliminate(m: list[list[int]], cols: int, p: int) -> list[int]:
    pivots = []
    r = 0
    rows = len(m)
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c] % p, p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        row_r = m[r]
        for i in range(rows):
            if i != r:
                f = m[i][c] % p
                if f:
                    m[i] = [(x - f * y) % p for x, y in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
    return pivots


def _as_lists(mat) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(mat, dtype=np.int64)]


def rank_mod_p(mat, p: int) -> int:
    m = _as_lists(mat)
    if not m or not m[0]:
        return 0
    return len(_eliminate(m, len(m[0]), p))


def rref_mod_p(mat, p: int):
    m = _as_lists(mat)
    if not m:
        return (), ()
    pivots = _eliminate(m, len(m[0]), p)
    return tuple(tuple(row) for row in m[: len(pivots)]), tuple(pivots)


def intersection_dims(basis_a, dims_a, basis_b, dims_b, p: int):
    a = _as_lists(basis_a)
    b = _as_lists(basis_b)
    cols = len(a[0]) if a else 0
    out = np.zeros((len(dims_a), len(dims_b)), dtype=np.int64)
    for i, da in enumerate(dims_a):
        for j, db in enumerate(dims_b):
            if da == 0 or db == 0:
                continue
            stacked = [row[:] for row in a[:da]] + [row[:] for row in b[:db]]
            out[i, j] = da + db - len(_eliminate(stacked, cols, p))
    return out
