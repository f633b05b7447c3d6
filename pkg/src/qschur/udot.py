"""The idempotented quantum group as formal words, its projections onto the
Schur algebras, and stabilization of canonical bases across levels.

Weights of U̇ live in Z^n and are read modulo (1, ..., 1): the projection to
level ``d`` translates a source weight ``lam`` by ``t (1, ..., 1)`` with
``t = (d - sum(lam)) / n`` and kills the word if ``t`` is not an integer or
the translated weight is not admissible.  With this convention one element of
U̇ has an image in every S(d + kn, n), which is what stabilization needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from qschur import schur
from qschur.laurent import ONE, ZERO, LaurentPoly, eval_at
from qschur.schur import (
    Letter,
    Matrix,
    SchurElem,
    Weight,
    all_matrices,
    apply_word,
    as_matrix,
    canonical_element,
    co,
    diag,
    leq,
    monomial_decomposition,
    monomial_expansion,
    monomial_for,
    order_key,
    ro,
)

Word = tuple[Letter, ...]


class StabilizationError(RuntimeError):
    pass


# expressions

def word_target(word: Sequence[Letter], lam: Sequence[int]) -> Weight:
    """Weight reached by applying ``word`` (last letter first) to 1_lam."""
    out = list(lam)
    for letter in reversed(word):
        for k, v in enumerate(schur.letter_shift(letter, len(out))):
            out[k] += v
    return tuple(out)


@dataclass
class UdotExpr:
    """A Z[q, q^-1]-combination of words ``w 1_lam``."""

    n: int
    terms: dict[tuple[Word, Weight], LaurentPoly] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (word, lam), c in self.terms.items():
            word = tuple((k, int(i), int(a)) for k, i, a in word)
            lam = tuple(int(x) for x in lam)
            if len(lam) != self.n:
                raise ValueError(f"weight {lam} does not have {self.n} entries")
            for k, i, a in word:
                if k not in ("E", "F") or not 1 <= i < self.n or a < 1:
                    raise ValueError(f"bad letter {(k, i, a)} for n={self.n}")
            if c:
                clean[(word, lam)] = clean.get((word, lam), ZERO) + c
        self.terms = {key: c for key, c in clean.items() if c}

    @classmethod
    def idempotent(cls, lam: Sequence[int]) -> "UdotExpr":
        return cls(len(lam), {((), tuple(lam)): ONE})

    @classmethod
    def word(cls, letters: Sequence[Letter], lam: Sequence[int], coeff: LaurentPoly = ONE) -> "UdotExpr":
        return cls(len(lam), {(tuple(letters), tuple(lam)): coeff})

    def __add__(self, other: "UdotExpr") -> "UdotExpr":
        if self.n != other.n:
            raise ValueError("expressions for different n")
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, ZERO) + c
        return UdotExpr(self.n, out)

    def __neg__(self):
        return UdotExpr(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: LaurentPoly) -> "UdotExpr":
        return UdotExpr(self.n, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "UdotExpr") -> "UdotExpr":
        """Concatenation; words whose weights do not match multiply to zero."""
        out: dict = {}
        for (w1, l1), c1 in self.terms.items():
            for (w2, l2), c2 in other.terms.items():
                if word_target(w2, l2) == l1:
                    key = (w1 + w2, l2)
                    out[key] = out.get(key, ZERO) + c1 * c2
        return UdotExpr(self.n, out)

    def residues(self) -> set[int]:
        return {sum(lam) % self.n for _, lam in self.terms}

    def to_json(self) -> list:
        return [{"word": [list(l) for l in w], "source": list(lam), "coeff": c.to_pairs()}
                for (w, lam), c in sorted(self.terms.items())]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (w, lam), c in sorted(self.terms.items()):
            letters = "".join(f"{k}{i}" + (f"^({a})" if a > 1 else "") for k, i, a in w)
            parts.append(f"({c})*{letters}1_{list(lam)}")
        return " + ".join(parts)


def lift_weight(lam: Sequence[int], d: int) -> Weight | None:
    n = len(lam)
    t, r = divmod(d - sum(lam), n)
    if r:
        return None
    return tuple(x + t for x in lam)


def project(x: UdotExpr, d: int) -> SchurElem:
    """Image of ``x`` in S(d, n)."""
    out = schur.zero(x.n, d)
    for (word, lam), c in x.terms.items():
        mu = lift_weight(lam, d)
        if mu is None or not schur.admissible(mu, d):
            continue
        out = out + apply_word(word, SchurElem.basis(diag(mu))).scale(c)
    return out


def admissible_levels(n: int, residue: int, d_range: Iterable[int]) -> list[int]:
    return sorted(d for d in d_range if d >= 0 and d % n == residue % n)


def equal_by_evaluation(x: UdotExpr, y: UdotExpr, d_range: Iterable[int]) -> bool:
    """Compare all projections in ``d_range``.

    This certifies equality only for the levels examined; the tower of Schur
    algebras separates elements of U̇ once enough levels are included.
    """
    if x.n != y.n:
        raise ValueError("expressions for different n")
    d_range = sorted(set(d_range))
    n = x.n
    for r in (x.residues() | y.residues()) or {0}:
        levels = admissible_levels(n, r, d_range)
        if not any(d + n in levels and d + 2 * n in levels for d in levels):
            raise ValueError(f"d_range needs three consecutive admissible levels for residue {r} mod {n}")
    return all(project(x, d) == project(y, d) for d in d_range)


# stable labels

@dataclass(frozen=True)
class StabMatrix:
    """An n x n integer matrix with non-negative off-diagonal entries, taken up to adding kI."""

    entries: Matrix

    def __post_init__(self):
        m = as_matrix(self.entries)
        object.__setattr__(self, "entries", m)
        if any(len(r) != len(m) for r in m):
            raise ValueError("label must be square")
        if any(m[i][j] < 0 for i in range(len(m)) for j in range(len(m)) if i != j):
            raise ValueError(f"off-diagonal entries of {m} must be non-negative")

    @property
    def n(self) -> int:
        return len(self.entries)

    def shift(self, k: int) -> "StabMatrix":
        return StabMatrix(_shift(self.entries, k))

    def min_diag(self) -> int:
        return min(self.entries[i][i] for i in range(self.n))

    def normalized(self) -> "StabMatrix":
        """The representative whose smallest diagonal entry is 0."""
        return self.shift(-self.min_diag())

    def level(self) -> int:
        return sum(map(sum, self.entries))

    def at_level(self, d: int) -> Matrix | None:
        k, r = divmod(d - self.level(), self.n)
        if r:
            return None
        A = _shift(self.entries, k)
        return A if all(A[i][i] >= 0 for i in range(self.n)) else None

    def to_json(self):
        return [list(r) for r in self.entries]


def _shift(A: Matrix, k: int) -> Matrix:
    return tuple(tuple(x + (k if i == j else 0) for j, x in enumerate(r)) for i, r in enumerate(A))


@dataclass
class StabilizedElement:
    label: StabMatrix
    expansions: dict[int, SchurElem]
    stable_coefficients: dict[Matrix, LaurentPoly]
    stable: bool
    agreeing_shifts: tuple[int, ...]
    orbit_family: str
    orbit_agreement: int | None = None

    @property
    def expr(self) -> UdotExpr:
        """Σ c_B · M_B with M_B the monomial word of B on the (recentered) source weight."""
        n = self.label.n
        out = UdotExpr(n)
        for B, c in self.stable_coefficients.items():
            word, _ = monomial_for(_nonneg_rep(B))
            out = out + UdotExpr.word(word, co(B), c)
        return out


def _nonneg_rep(B: Matrix) -> Matrix:
    # monomial words depend on the off-diagonal part only
    m = min(B[i][i] for i in range(len(B)))
    return _shift(B, -m) if m < 0 else B


def _family(b: SchurElem, k: int, mode: str) -> dict[Matrix, LaurentPoly]:
    coeffs = monomial_decomposition(b) if mode == "monomial" else b.coeffs
    return {_shift(B, -k): c for B, c in coeffs.items()}


def _uniform_power(f: dict, g: dict) -> int | None:
    """s with g = q^s f entrywise, if one exists."""
    if set(f) != set(g):
        return None
    powers = set()
    for B, c in f.items():
        s = g[B].min_exp() - c.min_exp()
        if c.shift(s) != g[B]:
            return None
        powers.add(s)
    return powers.pop() if len(powers) == 1 else None


def _agreement_depth(f: dict, g: dict) -> int:
    """Largest N such that f and g agree in every q-degree above -N."""
    worst = None
    for B in set(f) | set(g):
        diff = f.get(B, ZERO) - g.get(B, ZERO)
        if diff:
            worst = diff.max_exp() if worst is None else max(worst, diff.max_exp())
    return 10 ** 9 if worst is None else -worst


def stabilize(label: StabMatrix | Matrix, max_shifts: int = 6, confirmations: int = 3) -> StabilizedElement:
    """Canonical elements b_{label + kI} for k = 0, 1, ... (label normalized to min diagonal 0).

    Stability means ``confirmations`` consecutive shifts give the same recentered
    coefficients in the monomial words, which do not depend on the shift.
    """
    if not isinstance(label, StabMatrix):
        label = StabMatrix(label)
    label = label.normalized()
    expansions, fams, orbit = {}, [], []
    stable_from = None
    for k in range(max_shifts + 1):
        b = canonical_element(_shift(label.entries, k))
        expansions[k] = b
        fams.append(_family(b, k, "monomial"))
        orbit.append(_family(b, k, "orbit"))
        if len(fams) >= confirmations and all(f == fams[-1] for f in fams[-confirmations:]):
            stable_from = k - confirmations + 1
            break
    stable = stable_from is not None
    if orbit[-1] == orbit[-2] if len(orbit) > 1 else True:
        mode = "exact"
    elif _uniform_power(orbit[-2], orbit[-1]) is not None:
        mode = f"uniform power {_uniform_power(orbit[-2], orbit[-1])}"
    else:
        mode = "q-adic"
    depth = _agreement_depth(orbit[-2], orbit[-1]) if len(orbit) > 1 else None
    return StabilizedElement(
        label=label,
        expansions=expansions,
        stable_coefficients=fams[-1],
        stable=stable,
        agreeing_shifts=tuple(range(stable_from, stable_from + confirmations)) if stable else (),
        orbit_family=mode,
        orbit_agreement=depth,
    )


# certification of projected canonical bases

def labels_up_to(n: int, d_max: int) -> list[StabMatrix]:
    """One normalized label per class met by some S(d, n) with d <= d_max."""
    seen = {}
    for d in range(d_max + 1):
        for A in all_matrices(n, d):
            lab = StabMatrix(A).normalized()
            seen.setdefault(lab.entries, lab)
    return [seen[k] for k in sorted(seen)]


def _classify(img: SchurElem) -> tuple[str, Matrix | None]:
    if not img:
        return "zero", None
    top = img.leading()
    if img == canonical_element(top):
        return "canonical", top
    return "other", top


def verify_theorem_A(n: int, d_max: int, shift_window: int = 3, basis_override: dict | None = None) -> dict:
    """Certify that stabilized canonical elements of U̇ project onto the canonical bases of S(d, n), d <= d_max.

    ``basis_override`` maps d to a :class:`CanonicalBasis` used instead of the
    computed one for clauses (i) and (ii); it exists to test failure reporting.
    """
    if n not in (2, 3) or d_max > 4 or d_max < 0:
        raise ValueError("verify_theorem_A is limited to n in {2, 3} and 0 <= d_max <= 4")

    def reference(A: Matrix) -> SchurElem:
        d = sum(map(sum, A))
        if basis_override and d in basis_override:
            return basis_override[d].elements.get(A, SchurElem(n, d))
        return canonical_element(A)

    reports = []
    images: dict[int, dict[Matrix, list]] = {d: {} for d in range(d_max + 1)}
    for lab in labels_up_to(n, d_max):
        st = stabilize(lab, max_shifts=max(shift_window, 3) + 3, confirmations=shift_window)
        x = st.expr
        own = lab.level()
        existence = st.stable and project(x, own) == reference(lab.entries)
        levels, canonical_ok = [], True
        for d in range(d_max + 1):
            img = project(x, d)
            kind, top = _classify(img)
            if kind == "canonical" and img != reference(top):
                kind = "other"
            expected = lab.at_level(d)
            if kind == "other" or (expected is not None and top != expected) or (expected is None and img):
                canonical_ok = False
            if kind != "zero":
                images[d].setdefault(top, []).append(lab.to_json())
            levels.append({"d": d, "image": kind if kind != "other" else "non-canonical",
                           "matrix": None if top is None else [list(r) for r in top]})
        reports.append({
            "label": lab.to_json(),
            "stable": st.stable,
            "agreeing_shifts": list(st.agreeing_shifts),
            "orbit_family": st.orbit_family,
            "terms": len(st.stable_coefficients),
            "levels": levels,
            "clauses": {"existence": existence, "canonicity": canonical_ok},
        })
    injective = all(len(v) == 1 for per in images.values() for v in per.values())
    covered = all(set(images[d]) == set(all_matrices(n, d)) for d in range(d_max + 1))
    for r in reports:
        r["clauses"]["injectivity"] = all(
            len(images[lv["d"]][as_matrix(lv["matrix"])]) == 1 for lv in r["levels"] if lv["matrix"] is not None)
    clauses = {
        "existence": all(r["clauses"]["existence"] for r in reports),
        "canonicity": all(r["clauses"]["canonicity"] for r in reports),
        "injectivity": injective,
        "coverage": covered,
        "stability": all(r["stable"] for r in reports),
    }
    failing = sorted(k for k, v in clauses.items() if not v)
    return {
        "n": n,
        "d_max": d_max,
        "shift_window": shift_window,
        "basis_sizes": {str(d): len(all_matrices(n, d)) for d in range(d_max + 1)},
        "labels": reports,
        "clauses": clauses,
        "failing_clauses": failing,
        "pass": not failing,
    }


# sl2 closed form, found by brute force

def _is_canonical_shape(x: SchurElem, top: Matrix) -> bool:
    if x[top] != ONE or x.leading() != top:
        return False
    if any(B != top and (not leq(B, top) or c.max_exp() >= 0) for B, c in x.coeffs.items()):
        return False
    return schur.is_bar_invariant_elem(x)


def sl2_closed_form(label: StabMatrix | Matrix, extra_levels: int = 3) -> UdotExpr:
    """The single divided-power word (E^(a) F^(b) or F^(b) E^(a)) that is canonical at every level.

    Each candidate is projected to the label's first ``extra_levels`` levels
    and tested directly for bar-invariance and the q^-1 triangular shape; no
    stabilization or triangular solve is involved.
    """
    if not isinstance(label, StabMatrix):
        label = StabMatrix(label)
    if label.n != 2:
        raise ValueError("sl2 closed form needs n = 2")
    label = label.normalized()
    a, b = label.entries[0][1], label.entries[1][0]
    src = co(label.entries)
    ef = tuple(l for l in (("E", 1, a), ("F", 1, b)) if l[2])
    fe = tuple(l for l in (("F", 1, b), ("E", 1, a)) if l[2])
    for word in (ef, fe):
        cand = UdotExpr.word(word, src)
        ok = True
        for k in range(extra_levels):
            top = _shift(label.entries, k)
            if not _is_canonical_shape(project(cand, sum(map(sum, top))), top):
                ok = False
                break
        if ok:
            return cand
    raise StabilizationError(f"no single sl2 word is canonical for {label.entries}")


# translation off a wall and back

def normal_form_weights(d: int) -> list[Weight]:
    """Weights (a_1, 0^(a_1 - 1), a_2, 0^(a_2 - 1), ...) with n = d."""
    out = []
    for comp in _compositions_positive(d):
        w = []
        for a in comp:
            w += [a] + [0] * (a - 1)
        out.append(tuple(w))
    return out


def _compositions_positive(d: int):
    if d == 0:
        yield ()
        return
    for first in range(1, d + 1):
        for rest in _compositions_positive(d - first):
            yield (first,) + rest


def eq1_word(dims: Sequence[int], j: int) -> tuple[Word, Weight]:
    """The translation-off-and-back word at the block starting after position j (0-based count)."""
    d = len(dims) + 1
    mu = schur.weight_of(dims, d)
    if mu not in normal_form_weights(d):
        raise ValueError(f"weight {mu} is not in the wall normal form")
    full = (0,) + tuple(dims)
    if not 0 <= j < d or full[j] != j:
        raise ValueError(f"position j={j} does not satisfy d_j = j")
    a = mu[j]
    s = j
    e_part: list[Letter] = []
    for length in range(a - 1, 0, -1):
        e_part += [("E", s + t, 1) for t in range(1, length + 1)]
    f_part: list[Letter] = []
    for length in range(1, a):
        f_part += [("F", s + t, 1) for t in range(length, 0, -1)]
    return tuple(e_part + f_part), mu


def eq1_check(dims: Sequence[int], j: int) -> LaurentPoly:
    """Scalar m with (word) 1_mu = m 1_mu in S(d, d); checks m(1) = a!."""
    word, mu = eq1_word(dims, j)
    d = sum(mu)
    img = project(UdotExpr.word(word, mu), d)
    one = diag(mu)
    if set(img.coeffs) - {one}:
        raise AssertionError(f"wall-translation word at j={j} is not proportional to 1_{mu}: {img}")
    m = img[one]
    a = mu[j]
    if eval_at(m, 1) != math.factorial(a):
        raise AssertionError(f"m(1) = {eval_at(m, 1)} but {a}! = {math.factorial(a)}")
    return m


def eq1_positions(dims: Sequence[int]) -> list[int]:
    full = (0,) + tuple(dims)
    return [j for j in range(len(full)) if full[j] == j]


# surjectivity

def _det_at(rows: list[list[LaurentPoly]], q0) -> object:
    from fractions import Fraction

    m = [[eval_at(c, q0) for c in r] for r in rows]
    size = len(m)
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, size):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def surjectivity_check(n: int, d: int, sample_points=(2, 3, "5/3")) -> dict:
    """Monomials M_A against the orbit basis: unitriangular, determinant 1."""
    from fractions import Fraction

    if n > 3 or d > 3:
        raise ValueError("surjectivity_check is limited to n <= 3, d <= 3")
    blocks: dict[tuple, list[Matrix]] = {}
    for A in all_matrices(n, d):
        blocks.setdefault((ro(A), co(A)), []).append(A)
    triangular = True
    dets = set()
    size = 0
    for mats in blocks.values():
        mats = sorted(mats, key=order_key)
        idx = {A: k for k, A in enumerate(mats)}
        rows = [[ZERO] * len(mats) for _ in mats]
        for A in mats:
            for B, c in monomial_expansion(A).coeffs.items():
                rows[idx[B]][idx[A]] = c
        for r in range(len(mats)):
            if rows[r][r] != ONE or any(rows[r][c] for c in range(r)):
                triangular = False
        for pt in sample_points:
            dets.add(_det_at(rows, Fraction(pt)))
        size += len(mats)
    return {
        "n": n,
        "d": d,
        "size": size,
        "unitriangular": triangular,
        "determinants": sorted(str(x) for x in dets),
        "pass": triangular and dets == {1} and size == schur.basis_size(n, d),
    }
