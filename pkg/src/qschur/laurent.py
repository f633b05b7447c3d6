"""Exact Laurent polynomials in one variable ``q`` with integer coefficients.

Everything scalar in the package lives in ``Z[q, q^-1]``.  The quantum
integers use the balanced convention ``[m] = q^(m-1) + q^(m-3) + ... + q^(1-m)``
so that all of them are fixed by the bar involution ``q -> q^-1``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping


class LaurentPoly:
    """Immutable sparse Laurent polynomial; ``terms`` maps exponent -> coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | int = 0):
        if isinstance(terms, int):
            items = [(0, terms)]
        elif isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[int, int] = {}
        for e, c in items:
            if c:
                acc[e] = acc.get(e, 0) + c
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e]}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> "LaurentPoly":
        # caller guarantees sorted keys and no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_exp(self) -> int:
        return next(iter(self._terms))

    def max_exp(self) -> int:
        return next(reversed(self._terms))

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    # ring operations
    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.monomial(0, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                del acc[e]
        return LaurentPoly._raw({e: acc[e] for e in sorted(acc)})

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return ZERO
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: acc[e] for e in sorted(acc) if acc[e]})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) == 1:
                (e, c), = self._terms.items()
                if c in (1, -1):
                    return LaurentPoly.monomial(-e * (-k), c ** (-k))
            raise ValueError("only units can be raised to negative powers")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def divmod_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient ``self / other``; raises ``ArithmeticError`` if it does not divide."""
        if not other._terms:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._terms:
            return ZERO
        # reduce to ordinary polynomial long division from the top degree
        a_low, b_low = self.min_exp(), other.min_exp()
        num = {e - a_low: c for e, c in self._terms.items()}
        den = [(e - b_low, c) for e, c in other._terms.items()]
        den_top, den_lead = den[-1]
        quot: dict[int, int] = {}
        while num:
            top = max(num)
            if top < den_top:
                break
            c = num[top]
            if c % den_lead:
                break
            qe, qc = top - den_top, c // den_lead
            quot[qe] = qc
            for e, dc in den:
                k = qe + e
                v = num.get(k, 0) - qc * dc
                if v:
                    num[k] = v
                else:
                    num.pop(k, None)
        if num:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return LaurentPoly({e + a_low - b_low: c for e, c in quot.items()})

    def __repr__(self):
        return f"LaurentPoly({self._terms!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms.items()):
            if e == 0:
                mono = str(abs(c))
            else:
                base = "q" if e == 1 else f"q^{e}"
                mono = base if abs(c) == 1 else f"{abs(c)}*{base}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out

    def to_pairs(self) -> list[list[int]]:
        return [[e, c] for e, c in self._terms.items()]

    @classmethod
    def from_pairs(cls, pairs) -> "LaurentPoly":
        return cls((int(e), int(c)) for e, c in pairs)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
Q = LaurentPoly._raw({1: 1})
QINV = LaurentPoly._raw({-1: 1})


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def bar(a: LaurentPoly) -> LaurentPoly:
    """The involution ``q -> q^-1``."""
    return LaurentPoly._raw({-e: c for e, c in reversed(a._terms.items())})


@lru_cache(maxsize=None)
def quantum_int(m: int) -> LaurentPoly:
    if m == 0:
        return ZERO
    if m < 0:
        return -quantum_int(-m)
    return LaurentPoly._raw({e: 1 for e in range(1 - m, m, 2)})


@lru_cache(maxsize=None)
def quantum_factorial(m: int) -> LaurentPoly:
    if m < 0:
        raise ValueError(f"quantum factorial of negative integer {m}")
    out = ONE
    for k in range(2, m + 1):
        out = out * quantum_int(k)
    return out


@lru_cache(maxsize=None)
def quantum_binomial(m: int, k: int) -> LaurentPoly:
    """Balanced Gaussian binomial, computed with the q-Pascal rule (no division)."""
    if not 0 <= k <= m:
        raise ValueError(f"quantum binomial needs 0 <= k <= m, got m={m}, k={k}")
    if k == 0 or k == m:
        return ONE
    # [m,k] = q^{-k}[m-1,k] + q^{m-k}[m-1,k-1]
    return quantum_binomial(m - 1, k).shift(-k) + quantum_binomial(m - 1, k - 1).shift(m - k)


def eval_at(a: LaurentPoly, q0) -> Fraction:
    q0 = Fraction(q0)
    if q0 == 0:
        raise ZeroDivisionError("cannot evaluate a Laurent polynomial at q = 0")
    return sum((c * q0 ** e for e, c in a._terms.items()), Fraction(0))


def negative_part(a: LaurentPoly) -> LaurentPoly:
    """Terms with strictly negative exponent."""
    return LaurentPoly._raw({e: c for e, c in a._terms.items() if e < 0})


def is_bar_invariant(a: LaurentPoly) -> bool:
    return bar(a) == a


def specialize_sqrt(a: LaurentPoly, p) -> Fraction:
    """Evaluate at ``q = sqrt(p)``; only defined when every exponent is even."""
    if any(e % 2 for e in a._terms):
        raise ValueError(f"{a} has odd exponents; not rational at q^2 = {p}")
    p = Fraction(p)
    return sum((c * p ** (e // 2) for e, c in a._terms.items()), Fraction(0))
