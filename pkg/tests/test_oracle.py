from fractions import Fraction

import pytest

from qschur import fqlinalg as fl
from qschur import oracle as o
from qschur.laurent import LaurentPoly, eval_at
from qschur.schur import all_matrices, basis_size, block_matrices, orbit_dim, weights


def _random_function(source, target, p, rng):
    vals = {A: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for A in block_matrices(target, source)}
    return o.InvFunction(len(source), sum(source), p, source, target, vals)


def test_specialization_is_the_recorded_one():
    assert o.determine_specialization() == [o.SPECIALIZATION]


def test_delta_is_identity(rng):
    g = _random_function((1, 1), (2, 0), 2, rng)
    assert o.convolve(o.delta((2, 0), 2), g) == g
    assert o.convolve(g, o.delta((1, 1), 2)) == g


@pytest.mark.parametrize("n,d,p", [(2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 2), (3, 3, 2)])
def test_associativity(n, d, p, rng):
    wts = weights(n, d)
    for _ in range(3):
        a, b, c, e = (rng.choice(wts) for _ in range(4))
        f = _random_function(b, a, p, rng)
        g = _random_function(c, b, p, rng)
        h = _random_function(e, c, p, rng)
        left = o.convolve(o.convolve(f, g, False), h, False)
        right = o.convolve(f, o.convolve(g, h, False), False)
        assert left == right


def test_convolution_checks_dims():
    with pytest.raises(ValueError):
        o.convolve(o.delta((1, 1), 2), o.delta((2, 0), 2))


def test_blm_generator_examples():
    e = o.blm_generator(1, "+", (0,), 2, normalized=False, d=2)
    assert e.source == (0, 2) and e.target == (1, 1)
    assert e.values == {((0, 1), (0, 1)): 1}
    # E out of range: d_2 = d_1
    assert o.blm_generator(1, "+", (2,), 3, d=2).values == {}
    for p in (2, 3, 5):
        raw = o.blm_generator(1, "+", (1, 2), p, normalized=False, d=3)
        norm = o.blm_generator(1, "+", (1, 2), p, normalized=True, d=3)
        # -d_2 + d_1 + 1 = 0
        assert norm == raw
        raw = o.blm_generator(2, "+", (0, 2), p, normalized=False, d=3)
        norm = o.blm_generator(2, "+", (0, 2), p, normalized=True, d=3)
        assert norm == raw.scale(Fraction(p) ** (-3 + 2 + 1))


@pytest.mark.parametrize("p", [2, 3])
def test_generator_support_by_brute_force(p):
    # (F, F') in the E_1 orbit iff F' is F with step 1 enlarged by one dimension
    src, tgt = (1, 2), (2, 1)
    e = o._generator("E", 1, src, p, False)
    for F in o._flags(tgt, p):
        for G in o._flags(src, p):
            jump = F.steps[0].contains(G.steps[0], p) and F.steps[1:] == G.steps[1:]
            assert bool(e(fl.relative_position(F, G, p))) == jump


@pytest.mark.parametrize("n,d,q", [(2, 1, 2), (2, 1, 5), (2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2), (3, 3, 2)])
def test_relations_numeric(n, d, q):
    assert o.check_schur_relations_numeric(n, d, q)["pass"]


def test_commutator_on_20():
    lam = (2, 0)
    for p in (2, 3):
        ef = o.convolve(o._generator("E", 1, (1, 1), p, True), o._generator("F", 1, lam, p, True))
        assert ef.values == {((2, 0), (0, 0)): 1 + Fraction(1, p)}


def test_relation_checks_are_capped():
    with pytest.raises(ValueError):
        o.check_schur_relations_numeric(4, 2, 2)


def test_structure_constant_examples():
    assert o.structure_constant_poly(("E", 1, 1), ((0, 0), (0, 2)), ((0, 1), (0, 1))) == LaurentPoly(1)
    assert o.structure_constant_poly(("E", 1, 1), ((0, 1), (0, 1)), ((0, 2), (0, 0))) == LaurentPoly({0: 1, 1: 1})
    assert o.structure_constant_poly(("E", 1, 1), ((0, 2), (0, 1)), ((0, 3), (0, 0))) == LaurentPoly({0: 1, 1: 1, 2: 1})


def test_structure_constant_self_consistency():
    letter, A, B = ("F", 2, 1), ((1, 0, 0), (0, 1, 1), (0, 0, 1)), ((1, 0, 0), (0, 0, 1), (0, 1, 1))
    poly = o.structure_constant_poly(letter, A, B)
    for p in fl.SUPPORTED_PRIMES[:4]:
        assert eval_at(poly, p) == o.fiber_count(letter, A, B, p)


@pytest.mark.parametrize("n,d", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_generic_actions_match_fibre_counts(n, d):
    report = o.oracle_check(n, d, (2, 3, 5))
    assert report["held_out"] == 7
    assert report["pass"], [r for r in report["constants"] if not r["pass"]][:3]


def test_divided_powers_match_fibre_counts():
    letters = [("E", 1, 2), ("F", 1, 2)]
    report = o.oracle_check(2, 3, (2, 3, 5, 7), letters)
    assert report["pass"]


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_orbit_dim_is_fibre_degree(n, d):
    for A in all_matrices(n, d):
        poly = o.orbit_fibre_poly(A)
        assert poly.max_exp() == orbit_dim(A)
        assert poly.coeff(orbit_dim(A)) == 1


@pytest.mark.parametrize("n,d", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_orbit_count(n, d):
    assert o.orbit_count(n, d, 2) == basis_size(n, d)
