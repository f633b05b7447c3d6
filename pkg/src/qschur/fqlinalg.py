"""Subspaces, partial flags and relative positions over small prime fields.

Subspaces are stored in reduced row echelon form, which is unique, so two
subspaces are equal exactly when their representations are.  A flag keeps
both the canonical RREF of every step and an adapted basis (the first
``dims[i]`` rows span step ``i``) for the rank kernels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from qschur import _accel
from qschur.laurent import LaurentPoly, ONE, eval_at

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)
DEFAULT_ENUMERATION_CAP = 200_000


class EnumerationCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported prime {self.p}; expected one of {SUPPORTED_PRIMES}")

    def inv(self, a: int) -> int:
        a %= self.p
        if not a:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]  # RREF rows

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, vectors, d: int, p: int) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            return cls(d, ())
        rows, _ = _accel.rref_mod_p(vectors, p)
        return cls(d, rows)

    def contains(self, other: "Subspace", p: int) -> bool:
        if not other.basis:
            return True
        return _accel.rank_mod_p(self.basis + other.basis, p) == self.dim


@dataclass(frozen=True)
class Flag:
    """A flag ``0 ⊆ F_1 ⊆ ... ⊆ F_n = F_p^d``; ``dims`` has length n and ends in d."""

    dims: tuple[int, ...]
    steps: tuple[Subspace, ...]
    basis: tuple[tuple[int, ...], ...] = field(compare=False, repr=False)

    @property
    def d(self) -> int:
        return self.dims[-1]

    def key(self) -> tuple:
        return tuple(x for s in self.steps for row in s.basis for x in row)


def complete_dims(dims: Sequence[int], d: int) -> tuple[int, ...]:
    """Append the forced last step ``d`` (the whole space)."""
    dims = tuple(int(x) for x in dims)
    if any(b < a for a, b in zip(dims, dims[1:])) or (dims and (dims[0] < 0 or dims[-1] > d)):
        raise ValueError(f"dims {dims} must be weakly increasing within [0, {d}]")
    return dims + (d,)


def rref_subspaces(m: int, k: int, p: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All k-dimensional subspaces of F_p^m as RREF matrices."""
    if k == 0:
        yield ()
        return
    for pivots in itertools.combinations(range(m), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, m) if c not in pivots]
        for values in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), v in zip(free, values):
                rows[r][c] = v
            yield tuple(tuple(row) for row in rows)


def _extend(lower: Sequence[tuple[int, ...]], upper: Sequence[tuple[int, ...]], p: int) -> list[tuple[int, ...]]:
    """Rows of ``upper`` completing ``lower`` to a basis of span(upper)."""
    out = list(lower)
    rank = _accel.rank_mod_p(out, p) if out else 0
    for v in upper:
        if _accel.rank_mod_p(out + [v], p) > rank:
            out.append(v)
            rank += 1
    return out[len(lower):]


def intermediate_subspaces(lower_basis, upper_basis, extra: int, p: int, d: int):
    """Subspaces U with span(lower) ⊆ U ⊆ span(upper) and dim U = dim lower + extra.

    Yields ``(adapted_basis, Subspace)``: the first ``len(lower_basis)`` rows are
    ``lower_basis`` itself.
    """
    lower_basis = [tuple(v) for v in lower_basis]
    comp = _extend(lower_basis, [tuple(v) for v in upper_basis], p)
    m = len(comp)
    if not 0 <= extra <= m:
        return
    comp_arr = np.array(comp, dtype=np.int64).reshape(m, d)
    for coeffs in rref_subspaces(m, extra, p):
        new = [tuple(int(x) for x in row) for row in (np.array(coeffs, dtype=np.int64).reshape(extra, m) @ comp_arr) % p]
        basis = lower_basis + new
        yield basis, Subspace.span(basis, d, p)


def enumerate_flags(dims: Sequence[int], d: int, field: PrimeField | int,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> list[Flag]:
    """Every flag with the given step dimensions, sorted by concatenated RREF."""
    p = field.p if isinstance(field, PrimeField) else PrimeField(field).p
    full = complete_dims(dims, d)
    expected = count_flags(dims, d, p)
    if expected > cap:
        raise EnumerationCapExceeded(f"{expected} flags exceed the enumeration cap {cap}")
    identity = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    partial: list[tuple[list, list[Subspace]]] = [([], [])]
    prev = 0
    for k in full:
        nxt = []
        for basis, steps in partial:
            for new_basis, sub in intermediate_subspaces(basis, identity, k - prev, p, d):
                nxt.append((new_basis, steps + [sub]))
        partial = nxt
        prev = k
    flags = [Flag(full, tuple(steps), tuple(basis)) for basis, steps in partial]
    flags.sort(key=Flag.key)
    assert len(flags) == expected
    return flags


def standard_flag_pair(A, p: int) -> tuple[Flag, Flag]:
    """A representative (F, F') of the orbit with relative position ``A``.

    One basis vector per unit of ``a_ij``; ``F_i`` is spanned by the vectors
    with row index <= i and ``F'_j`` by those with column index <= j.
    """
    A = [list(row) for row in A]
    n = len(A)
    d = sum(map(sum, A))
    labels = [(i, j) for i in range(n) for j in range(n) for _ in range(A[i][j])]
    vec = {k: tuple(int(t == k) for t in range(d)) for k in range(d)}

    def build(key):
        order = sorted(range(d), key=lambda k: (key(labels[k]), k))
        basis = tuple(vec[k] for k in order)
        dims, steps = [], []
        for s in range(n):
            dim = sum(1 for k in range(d) if key(labels[k]) <= s)
            dims.append(dim)
            steps.append(Subspace.span(basis[:dim], d, p))
        return Flag(tuple(dims), tuple(steps), basis)

    return build(lambda ij: ij[0]), build(lambda ij: ij[1])


def intersection_table(F: Flag, G: Flag, p: int) -> np.ndarray:
    """``t[i][j] = dim(F_i ∩ G_j)`` for i, j in 0..n (index 0 is the zero space)."""
    dims_f = (0,) + F.dims
    dims_g = (0,) + G.dims
    return _accel.intersection_dims(F.basis, dims_f, G.basis, dims_g, p)


def relative_position(F: Flag, G: Flag, p: int) -> tuple[tuple[int, ...], ...]:
    """Orbit label of the pair (F, G): rows follow F, columns follow G."""
    if F.d != G.d or len(F.dims) != len(G.dims):
        raise ValueError("flags must live in the same space and have the same length")
    t = intersection_table(F, G, p)
    n = len(F.dims)
    return tuple(
        tuple(int(t[i][j] - t[i - 1][j] - t[i][j - 1] + t[i - 1][j - 1]) for j in range(1, n + 1))
        for i in range(1, n + 1)
    )


def gaussian_multinomial(weight: Sequence[int]) -> LaurentPoly:
    """Unbalanced q-multinomial ``[d; w_1, ..., w_n]`` as an ordinary polynomial in q."""
    num = ONE
    total = 0
    for w in weight:
        for k in range(1, w + 1):
            total += 1
            num = num * LaurentPoly({e: 1 for e in range(total)})
            num = num.divmod_exact(LaurentPoly({e: 1 for e in range(k)}))
    return num


def count_flags(dims: Sequence[int], d: int, q: int) -> int:
    full = complete_dims(dims, d)
    weight = [b - a for a, b in zip((0,) + full[:-1], full)]
    value = eval_at(gaussian_multinomial(weight), q)
    assert value.denominator == 1
    return int(value)
