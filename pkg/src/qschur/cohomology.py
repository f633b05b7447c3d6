"""Partially symmetric polynomials, coinvariant quotients and Chern-class series.

The coinvariant algebra ``k[x_1..x_d] / (e_1, ..., e_d)`` is handled through
the lex Gröbner basis ``h_k(x_k, ..., x_d)``, k = 1..d (leading term x_k^k),
which has integer coefficients and leading coefficients 1, so the same normal
form works in every characteristic.  ``R̄_mu`` embeds in it, so block
symmetric classes are stored by their normal forms there.  One power of q
stands for one unit of polynomial degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from qschur.fqlinalg import gaussian_multinomial
from qschur.laurent import LaurentPoly, quantum_int

Monomial = tuple[int, ...]


# coefficients

@dataclass(frozen=True)
class Coeffs:
    """Q (char 0) or F_p."""

    char: int = 0

    def __post_init__(self):
        if self.char < 0 or (self.char and any(self.char % k == 0 for k in range(2, int(self.char ** 0.5) + 1))) \
                or self.char == 1:
            raise ValueError(f"characteristic must be 0 or a prime, got {self.char}")

    def __call__(self, c):
        if not self.char:
            return Fraction(c)
        c = Fraction(c)
        if c.denominator % self.char == 0:
            raise ZeroDivisionError(f"{c} is not defined in characteristic {self.char}")
        return c.numerator * pow(c.denominator, -1, self.char) % self.char

    def inv(self, c):
        c = self(c)
        if not c:
            raise ZeroDivisionError("zero is not invertible")
        return 1 / c if not self.char else pow(c, -1, self.char)


# polynomials

@dataclass(frozen=True)
class Poly:
    nvars: int
    coeffs: Coeffs
    terms: tuple[tuple[Monomial, object], ...] = ()

    @classmethod
    def make(cls, nvars: int, coeffs: Coeffs, terms: dict) -> "Poly":
        clean = {}
        for m, c in terms.items():
            c = coeffs(c)
            if c:
                clean[m] = c
        return cls(nvars, coeffs, tuple(sorted(clean.items(), reverse=True)))

    @classmethod
    def const(cls, nvars: int, coeffs: Coeffs, c=1) -> "Poly":
        return cls.make(nvars, coeffs, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, coeffs: Coeffs, k: int) -> "Poly":
        return cls.make(nvars, coeffs, {tuple(int(t == k) for t in range(nvars)): 1})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def _new(self, terms: dict) -> "Poly":
        return Poly.make(self.nvars, self.coeffs, terms)

    def __add__(self, other: "Poly") -> "Poly":
        out = self.as_dict()
        for m, c in other.terms:
            out[m] = out.get(m, 0) + c
        return self._new(out)

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Poly":
        return self._new({m: c * v for m, v in self.terms})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return self._new(out)

    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def homogeneous_part(self, k: int) -> "Poly":
        return self._new({m: c for m, c in self.terms if sum(m) == k})


def elementary(k: int, variables: Sequence[int], nvars: int, coeffs: Coeffs) -> Poly:
    terms = {}
    for subset in itertools.combinations(variables, k):
        terms[tuple(int(t in subset) for t in range(nvars))] = 1
    return Poly.make(nvars, coeffs, terms)


def complete(k: int, variables: Sequence[int], nvars: int, coeffs: Coeffs) -> Poly:
    terms = {}
    for combo in itertools.combinations_with_replacement(variables, k):
        m = [0] * nvars
        for v in combo:
            m[v] += 1
        terms[tuple(m)] = 1
    return Poly.make(nvars, coeffs, terms)


# rings

@dataclass
class BlockedPolyRing:
    """``R_mu`` (``quotient=False``) or ``R̄_mu`` (``quotient=True``) for block sizes ``mu``."""

    blocks: tuple[int, ...]
    quotient: bool = True
    char: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.blocks = tuple(int(b) for b in self.blocks)
        if any(b < 0 for b in self.blocks):
            raise ValueError(f"block sizes must be non-negative: {self.blocks}")
        self.k = Coeffs(self.char)

    @classmethod
    def from_dims(cls, dims: Sequence[int], d: int, quotient: bool = True, char: int = 0) -> "BlockedPolyRing":
        full = (0,) + tuple(dims) + (d,)
        if any(b < a for a, b in zip(full, full[1:])):
            raise ValueError(f"dims {tuple(dims)} are not weakly increasing within [0, {d}]")
        return cls(tuple(b - a for a, b in zip(full, full[1:])), quotient, char)

    @property
    def d(self) -> int:
        return sum(self.blocks)

    @property
    def n(self) -> int:
        return len(self.blocks)

    def block_vars(self, i: int) -> range:
        """0-based variable indices of block i (1-based)."""
        start = sum(self.blocks[: i - 1])
        return range(start, start + self.blocks[i - 1])

    def one(self) -> Poly:
        return Poly.const(self.d, self.k)

    def zero(self) -> Poly:
        return Poly.make(self.d, self.k, {})

    def _groebner(self) -> list[Poly]:
        if "gb" not in self._cache:
            d = self.d
            self._cache["gb"] = [complete(k + 1, range(k, d), d, self.k) for k in range(d)]
        return self._cache["gb"]

    def reduce(self, f: Poly) -> Poly:
        if not self.quotient:
            return f
        gb = self._groebner()
        rem: dict = {}
        work = f.as_dict()
        while work:
            m = max(work)
            c = work.pop(m)
            if not c:
                continue
            k = next((k for k in range(self.d) if m[k] >= k + 1), None)
            if k is None:
                rem[m] = c
                continue
            # subtract c * x^(m - (k+1) e_k) * g_k; g_k is monic with leading term x_k^(k+1)
            shift = list(m)
            shift[k] -= k + 1
            for gm, gc in gb[k].terms:
                t = tuple(a + b for a, b in zip(shift, gm))
                if t == m:
                    continue
                work[t] = self.k(work.get(t, 0) - c * gc)
                if not work[t]:
                    del work[t]
        return Poly.make(self.d, self.k, rem)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a * b)

    def standard_monomials(self, degree: int | None = None) -> list[Monomial]:
        """Monomials x^a with a_k <= k (0-based k): a basis of the full coinvariant algebra."""
        out = [m for m in itertools.product(*[range(k + 1) for k in range(self.d)])]
        if degree is not None:
            out = [m for m in out if sum(m) == degree]
        return sorted(out)

    def top_degree(self) -> int:
        """Degree of the socle of R̄_mu, i.e. dim Fl(mu)."""
        b = self.blocks
        return sum(b[i] * b[j] for i in range(len(b)) for j in range(i + 1, len(b)))


# truncated power series in u

@dataclass
class TruncatedSeries:
    ring: BlockedPolyRing
    coeffs: list[Poly]

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_list(cls, ring: BlockedPolyRing, coeffs: Sequence[Poly], truncation: int) -> "TruncatedSeries":
        out = [ring.reduce(c) for c in list(coeffs)[: truncation + 1]]
        out += [ring.zero()] * (truncation + 1 - len(out))
        return cls(ring, out)

    @classmethod
    def one(cls, ring: BlockedPolyRing, truncation: int) -> "TruncatedSeries":
        return cls.from_list(ring, [ring.one()], truncation)

    def _check(self, other):
        if self.ring is not other.ring or self.truncation != other.truncation:
            raise ValueError("series over different rings or truncations")

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        N = self.truncation
        out = [self.ring.zero() for _ in range(N + 1)]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(N + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries.from_list(self.ring, out, N)

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.truncation == other.truncation and all(
            not (a - b) for a, b in zip(self.coeffs, other.coeffs))

    def constant(self):
        c = self.coeffs[0]
        if any(sum(m) for m, _ in c.terms):
            raise ArithmeticError("constant term is not a scalar")
        return dict(c.terms).get((0,) * self.ring.d, 0)

    def inverse(self) -> "TruncatedSeries":
        c0 = self.constant()
        if not c0:
            raise ArithmeticError("series with zero constant term is not invertible")
        inv0 = self.ring.k.inv(c0)
        N = self.truncation
        out = [self.ring.one().scale(inv0)]
        for m in range(1, N + 1):
            acc = self.ring.zero()
            for j in range(1, m + 1):
                if self.coeffs[j]:
                    acc = acc + self.ring.mul(self.coeffs[j], out[m - j])
            out.append(self.ring.reduce(-acc.scale(inv0)))
        return TruncatedSeries(self.ring, out)

    def __pow__(self, e: int) -> "TruncatedSeries":
        base = self if e >= 0 else self.inverse()
        out = TruncatedSeries.one(self.ring, self.truncation)
        for _ in range(abs(e)):
            out = out * base
        return out

    def __truediv__(self, other):
        return self * other.inverse()

    def is_zero_above(self, k: int) -> bool:
        return all(not c for c in self.coeffs[k + 1:])


def chern_total(i: int, ring: BlockedPolyRing, truncation: int | None = None) -> TruncatedSeries:
    """c(T_i) = sum_k e_k(block i) u^k; ``i = n + 1`` gives 1."""
    N = ring.d if truncation is None else truncation
    if i == ring.n + 1:
        return TruncatedSeries.one(ring, N)
    if not 1 <= i <= ring.n:
        raise ValueError(f"block index {i} outside 1..{ring.n}")
    vars_ = list(ring.block_vars(i))
    return TruncatedSeries.from_list(
        ring, [elementary(k, vars_, ring.d, ring.k) for k in range(len(vars_) + 1)], N)


def verify_chern_power_identity(ring: BlockedPolyRing, k: int, truncation: int | None = None) -> bool:
    """c(T_k)^n against the product of all c(T_i) times the two ratio products; in R̄ the first factor is 1."""
    N = ring.d if truncation is None else truncation
    n = ring.n
    c = {i: chern_total(i, ring, N) for i in range(1, n + 1)}
    lhs = c[k] ** n
    rhs = TruncatedSeries.one(ring, N)
    for i in range(1, n + 1):
        rhs = rhs * c[i]
    if ring.quotient and rhs != TruncatedSeries.one(ring, N):
        return False
    for i in range(1, k):
        rhs = rhs * (c[i + 1] / c[i]) ** i
    for i in range(k, n):
        rhs = rhs * (c[i] / c[i + 1]) ** (n - i)
    return lhs == rhs


def telescoping_check(ring: BlockedPolyRing, i: int) -> bool:
    """prod_{k=i}^n c(T_k)/c(T_{k+1}) equals c(T_i) and vanishes above the block size."""
    N = ring.d
    prod = TruncatedSeries.one(ring, N)
    for k in range(i, ring.n + 1):
        prod = prod * (chern_total(k, ring, N) / chern_total(k + 1, ring, N))
    return prod == chern_total(i, ring, N) and prod.is_zero_above(ring.blocks[i - 1])


@lru_cache(maxsize=None)
def _binom_frac(n: int, m: int) -> Fraction:
    """(1/n choose m)."""
    out = Fraction(1)
    for i in range(m):
        out *= Fraction(1, n) - i
    for i in range(1, m + 1):
        out /= i
    return out


def nth_root_series(s: TruncatedSeries, n: int) -> TruncatedSeries:
    """The series t with constant term 1 and t^n = s."""
    if n < 1:
        raise ValueError("n must be positive")
    char = s.ring.char
    if char and n % char == 0:
        raise ZeroDivisionError(f"n = {n} is not invertible in characteristic {char}")
    if s.constant() != s.ring.k(1):
        raise ArithmeticError("nth root needs constant term 1")
    N = s.truncation
    t = s - TruncatedSeries.one(s.ring, N)
    out = TruncatedSeries.one(s.ring, N)
    power = TruncatedSeries.one(s.ring, N)
    for m in range(1, N + 1):
        power = power * t
        out = out + TruncatedSeries(s.ring, [c.scale(s.ring.k(_binom_frac(n, m))) for c in power.coeffs])
    if out ** n != s:
        raise ArithmeticError("nth root failed to round-trip")
    return out


# linear algebra on normal forms

def _rank(vectors: list[dict], coeffs: Coeffs) -> tuple[int, list[dict]]:
    """Rank of a list of sparse vectors, with an echelon basis."""
    basis: list[tuple[Monomial, dict]] = []
    for v in vectors:
        v = dict(v)
        for piv, b in basis:
            c = v.get(piv)
            if c:
                for m, x in b.items():
                    v[m] = coeffs(v.get(m, 0) - c * x)
                v = {m: x for m, x in v.items() if x}
        if v:
            piv = max(v)
            inv = coeffs.inv(v[piv])
            basis.append((piv, {m: coeffs(x * inv) for m, x in v.items()}))
    return len(basis), [b for _, b in basis]


def _graded_span(ring: BlockedPolyRing, generators: list[Poly], top: int) -> list[int]:
    """Graded dimensions of the subalgebra of ring generated by homogeneous ``generators``."""
    gens = [(g.degree(), ring.reduce(g)) for g in generators if ring.reduce(g)]
    layers: list[list[Poly]] = [[ring.one()]]
    dims = [1]
    for deg in range(1, top + 1):
        cands = []
        for gd, g in gens:
            if 0 < gd <= deg:
                cands += [ring.mul(g, b) for b in layers[deg - gd]]
        r, basis = _rank([c.as_dict() for c in cands], ring.k)
        layers.append([Poly.make(ring.d, ring.k, b) for b in basis])
        dims.append(r)
    return dims


def block_invariant_dims(ring: BlockedPolyRing) -> list[int]:
    """Graded dimensions of R̄_mu computed by linear algebra: the algebra generated by block elementary symmetric polynomials."""
    gens = [elementary(k, list(ring.block_vars(i)), ring.d, ring.k)
            for i in range(1, ring.n + 1) for k in range(1, ring.blocks[i - 1] + 1)]
    return _graded_span(ring, gens, ring.top_degree())


def bubble_image_subring(ring: BlockedPolyRing, max_degree: int | None = None) -> dict:
    """Graded dimensions of the subalgebra generated by the coefficients of c(T_{i+1})/c(T_i)."""
    if not ring.quotient:
        raise ValueError("bubble image is computed in the non-equivariant quotient")
    top = ring.top_degree()
    N = ring.d if max_degree is None else max_degree
    gens = []
    for i in range(1, ring.n):
        ratio = chern_total(i + 1, ring, N) / chern_total(i, ring, N)
        for k in range(1, N + 1):
            gens += [ratio.coeffs[k].homogeneous_part(k)]
    sub = _graded_span(ring, gens, top)
    hilb = hilbert_coefficients(ring.blocks)
    return {
        "blocks": list(ring.blocks),
        "char": ring.char,
        "subalgebra_dims": sub,
        "hilbert_dims": hilb,
        "full": sub == hilb,
    }


def hilbert_coefficients(blocks: Sequence[int]) -> list[int]:
    poly = gaussian_multinomial(blocks)
    return [poly.coeff(e) for e in range(poly.max_exp() + 1)] if poly else [0]


def hilbert_series(dims: Sequence[int], d: int) -> LaurentPoly:
    full = (0,) + tuple(dims) + (d,)
    if any(b < a for a, b in zip(full, full[1:])):
        raise ValueError(f"dims {tuple(dims)} are not weakly increasing within [0, {d}]")
    return gaussian_multinomial([b - a for a, b in zip(full, full[1:])])


def induction_poincare(i: int, dims: Sequence[int], d: int) -> LaurentPoly:
    """Balanced Poincaré polynomial of the projective-space fibre, [d_{i+1} - d_i]."""
    full = (0,) + tuple(dims) + (d,)
    if not 1 <= i < len(full) - 1:
        raise ValueError(f"index {i} out of range for dims {tuple(dims)}")
    return quantum_int(full[i + 1] - full[i])


def cohomology_report(blocks: Sequence[int], char: int = 0) -> dict:
    """All scalar identities for one block structure; used by the CLI."""
    bar_ring = BlockedPolyRing(tuple(blocks), True, char)
    eq_ring = BlockedPolyRing(tuple(blocks), False, char)
    n = bar_ring.n
    power = {k: verify_chern_power_identity(bar_ring, k) for k in range(1, n + 1)}
    tele = {i: telescoping_check(eq_ring, i) for i in range(1, n + 1)}
    tele_bar = {i: telescoping_check(bar_ring, i) for i in range(1, n + 1)}
    bubble = bubble_image_subring(bar_ring)
    dims_la = block_invariant_dims(bar_ring)
    roots = {}
    for k in range(1, n + 1):
        target = TruncatedSeries.one(bar_ring, bar_ring.d)
        for i in range(1, k):
            target = target * (chern_total(i + 1, bar_ring) / chern_total(i, bar_ring)) ** i
        for i in range(k, n):
            target = target * (chern_total(i, bar_ring) / chern_total(i + 1, bar_ring)) ** (n - i)
        try:
            roots[k] = nth_root_series(target, n) == chern_total(k, bar_ring)
        except ZeroDivisionError:
            roots[k] = "n not invertible"
    checks = {
        "chern_power_identity": all(power.values()),
        "telescoping": all(tele.values()) and all(tele_bar.values()),
        "hilbert_matches_linear_algebra": dims_la == hilbert_coefficients(bar_ring.blocks),
    }
    return {
        "blocks": list(blocks),
        "char": char,
        "checks": checks,
        "nth_root_recovers_chern": {str(k): v for k, v in roots.items()},
        "bubble_image": bubble,
        "pass": all(checks.values()),
    }
