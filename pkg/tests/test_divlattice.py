from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffgcd import RationalFunction
from ffgcd.divlattice import (
    UnitTuple,
    UnsupportedFactorError,
    exponent_vector,
    find_relation,
    integer_left_kernel,
    integer_row_echelon,
    is_multiplicatively_independent_mod_k,
    refine_coprime_basis,
)
from ffgcd.ffcore import height, poly_str

from conftest import seeds

K = RationalFunction.parse
GENERATORS = ["t", "t+1", "t-1", "t^2+1", "2*t", "t^2", "t*(t+1)", "(t+1)/t"]


def basis_strs(fs):
    return sorted(poly_str(b) for b in refine_coprime_basis([K(f) for f in fs]))


def test_coprime_basis_examples():
    assert basis_strs(["t", "t+1"]) == ["t", "t+1"]
    assert basis_strs(["t^2*(t+1)", "t*(t+1)^2"]) == ["t", "t+1"]
    assert basis_strs(["t^2-1", "t-1"]) == ["t+1", "t-1"]


def test_exponent_vector_examples():
    B = refine_coprime_basis([K("t"), K("t+1")])
    e = exponent_vector(K("3*t^2/(t+1)"), B)
    assert e.exponents == (2, -1) and e.constant == 3
    one = exponent_vector(K("1"), B)
    assert one.exponents == (0, 0) and one.constant == 1
    with pytest.raises(UnsupportedFactorError):
        exponent_vector(K("t-2"), B)


def test_find_relation_examples():
    rel = find_relation(UnitTuple([K("t"), K("2*t")]), 2)
    assert rel.exponents == (1, -1) and rel.witness == Fraction(1, 2)
    rel = find_relation(UnitTuple([K("t^2/(t+1)"), K("(t+1)^3/t^6")]), 4)
    assert rel.exponents == (3, 1) and rel.witness == 1
    assert find_relation(UnitTuple([K("t"), K("t+1")]), 10) is None


def test_independence_examples():
    assert is_multiplicatively_independent_mod_k([K("t"), K("t+1")])
    assert not is_multiplicatively_independent_mod_k([K("t"), K("t^2")])
    assert not is_multiplicatively_independent_mod_k([K("t/(t+1)"), K("(t+1)/t")])


def test_integer_row_echelon_and_kernel():
    rows = [[2, -1], [-6, 3]]
    _, U, rank = integer_row_echelon(rows)
    assert rank == 1
    for k in integer_left_kernel(rows):
        assert [sum(k[i] * rows[i][j] for i in range(2)) for j in range(2)] == [0, 0]
    assert integer_left_kernel([[1, 0], [0, 1]]) == []


def brute_force(entries, bound):
    for m in product(range(-bound, bound + 1), repeat=len(entries)):
        if any(m) and sum(map(abs, m)) <= bound:
            x = RationalFunction(1)
            for e, k in zip(entries, m):
                x = x * e**k
            if x.is_constant():
                return m
    return None


tuples = st.lists(st.sampled_from(GENERATORS), min_size=2, max_size=3)


@given(tuples, st.integers(1, 5))
def test_relation_agrees_with_enumeration(names, bound):
    g = [K(x) for x in names]
    rel = find_relation(UnitTuple(g), bound)
    assert (rel is None) == (brute_force(g, bound) is None)
    if rel is not None:
        assert rel.l1_norm <= bound
        assert height(UnitTuple(g).power_product(rel.exponents)) == 0


@given(tuples)
def test_reconstruction(names):
    g = UnitTuple([K(x) for x in names])
    for f, ev in zip(g.entries, g.vectors):
        x = RationalFunction.constant(ev.constant)
        for b, e in zip(g.basis.elements, ev.exponents):
            x = x * RationalFunction(b) ** e
        assert x == f


@given(tuples, seeds, st.fractions(min_value=1, max_value=9))
def test_independence_invariances(names, rnd, c):
    g = [K(x) for x in names]
    base = is_multiplicatively_independent_mod_k(g)
    perm = g[:]
    rnd.shuffle(perm)
    assert is_multiplicatively_independent_mod_k(perm) == base
    scaled = [g[0] * RationalFunction.constant(c)] + g[1:]
    assert is_multiplicatively_independent_mod_k(scaled) == base
