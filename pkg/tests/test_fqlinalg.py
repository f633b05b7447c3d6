import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qschur import fqlinalg as fl
from qschur.schur import block_matrices, transpose


def test_flag_enumeration_examples():
    assert len(fl.enumerate_flags((1,), 2, 2)) == 3
    assert len(fl.enumerate_flags((0,), 1, 3)) == 1
    assert len(fl.enumerate_flags((1, 2), 3, 2)) == 21


def test_enumeration_is_sorted_and_duplicate_free():
    flags = fl.enumerate_flags((1, 2), 3, 3)
    keys = [F.key() for F in flags]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_flags_are_nested():
    for F in fl.enumerate_flags((1, 3), 4, 2):
        for a, b in zip(F.steps, F.steps[1:]):
            assert b.contains(a, 2)
        assert [s.dim for s in F.steps] == list(F.dims)


def test_cap():
    with pytest.raises(fl.EnumerationCapExceeded):
        fl.enumerate_flags((1, 2), 3, 2, cap=10)


def test_bad_inputs():
    with pytest.raises(ValueError):
        fl.PrimeField(4)
    with pytest.raises(ValueError):
        fl.enumerate_flags((2, 1), 3, 2)


def test_count_flags_examples():
    assert fl.count_flags((1,), 2, 3) == 4
    assert fl.count_flags((2,), 2, 5) == 1
    assert fl.count_flags((1, 2), 3, 2) == 21


D4_CASES = [((1,), 2), ((1, 2), 3), ((2,), 4), ((0, 1), 2), ((1, 3), 4), ((2, 3), 4), ((1, 2, 3), 4)]


def _case_marks(p, dims, d):
    size = fl.count_flags(dims, d, p)
    if size > fl.DEFAULT_ENUMERATION_CAP:
        return [pytest.mark.skip(reason="above the enumeration cap; see test_count_by_pivot_patterns")]
    return [pytest.mark.slow] if size > 20000 else []


@pytest.mark.parametrize("p,dims,d", [
    pytest.param(p, dims, d, marks=_case_marks(p, dims, d)) for p in fl.SUPPORTED_PRIMES for dims, d in D4_CASES
])
def test_count_matches_enumeration(p, dims, d):
    assert len(fl.enumerate_flags(dims, d, p)) == fl.count_flags(dims, d, p)


def _grassmannian_by_pivots(m, k, p):
    # each RREF matrix has p^(free entries) choices for a fixed pivot set
    return sum(p ** sum(m - c - 1 - (k - r - 1) for r, c in enumerate(piv))
               for piv in itertools.combinations(range(m), k))


@pytest.mark.parametrize("p", fl.SUPPORTED_PRIMES)
@pytest.mark.parametrize("dims,d", D4_CASES)
def test_count_by_pivot_patterns(p, dims, d):
    full = (0,) + tuple(dims) + (d,)
    total = 1
    for a, b in zip(full, full[1:]):
        total *= _grassmannian_by_pivots(d - a, b - a, p)
    assert total == fl.count_flags(dims, d, p)


def test_subspace_uniqueness():
    a = fl.Subspace.span([(1, 1, 0), (0, 1, 1)], 3, 3)
    b = fl.Subspace.span([(1, 2, 1), (2, 0, 1)], 3, 3)
    c = fl.Subspace.span([(1, 0, 0), (0, 1, 1)], 3, 3)
    assert a == b and a.basis == b.basis
    assert a != c


def test_relative_position_examples():
    lines = fl.enumerate_flags((1,), 2, 2)
    F, G = lines[0], lines[1]
    assert fl.relative_position(F, G, 2) == ((0, 1), (1, 0))
    assert fl.relative_position(F, F, 2) == ((1, 0), (0, 1))


@pytest.mark.parametrize("A", [((1, 0), (1, 1)), ((0, 2, 0), (1, 0, 0), (0, 0, 1)), ((1, 1), (1, 0))])
def test_standard_pair_realizes_matrix(A):
    for p in (2, 3):
        F, G = fl.standard_flag_pair(A, p)
        assert fl.relative_position(F, G, p) == A


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_relative_position_transposes(p, data):
    flags_a = fl.enumerate_flags((1, 2), 3, p)
    flags_b = fl.enumerate_flags((2, 2), 3, p)
    F = data.draw(st.sampled_from(flags_a))
    G = data.draw(st.sampled_from(flags_b))
    A = fl.relative_position(F, G, p)
    assert fl.relative_position(G, F, p) == transpose(A)
    assert sum(map(sum, A)) == 3
    assert tuple(map(sum, A)) == (1, 1, 1)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("da,db,d", [((1,), (1,), 2), ((1,), (2,), 3), ((1, 2), (1, 2), 3), ((0, 2), (1, 1), 3)])
def test_orbit_completeness(p, da, db, d):
    fa, fb = fl.enumerate_flags(da, d, p), fl.enumerate_flags(db, d, p)
    seen = {fl.relative_position(F, G, p) for F, G in itertools.product(fa, fb)}
    row = fa[0].dims
    col = fb[0].dims
    wa = tuple(b - a for a, b in zip((0,) + row, row))
    wb = tuple(b - a for a, b in zip((0,) + col, col))
    assert seen == set(block_matrices(wa, wb))


def test_gaussian_multinomial():
    assert fl.gaussian_multinomial((1, 1)).to_pairs() == [[0, 1], [1, 1]]
    assert fl.gaussian_multinomial((1, 1, 1)).to_pairs() == [[0, 1], [1, 2], [2, 2], [3, 1]]
