import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ffgcd import ClosedPoint, FieldError, RationalFunction
from ffgcd.derivation import D_u
from ffgcd.divlattice import UnitTuple, find_relation
from ffgcd.ffcore import height
from ffgcd.harness import generators as gen
from ffgcd.mvpoly import (
    FactoredForm,
    F_e_u,
    MvPoly,
    certify_irreducible,
    coprime_criterion_irreducible,
    dth_power_free_decompose,
    exact_div,
    gauss_valuation,
    is_coprime,
    mv_gcd,
    mv_height,
    relevant_height,
)

from conftest import seeds

K = RationalFunction.parse
SYMS = sympy.symbols("t x1 x2 x3")


def P(text, n=2):
    return MvPoly.parse(text, n)


def to_sympy(F: MvPoly):
    return sympy.sympify(F.to_str().replace("^", "**"), locals={str(s): s for s in SYMS})


def rand_poly(rnd, n, deg, coeff_deg=1):
    return gen.rand_mvpoly(rnd, n, deg, gen.poly_coeff(rnd, coeff_deg), terms=rnd.randint(1, 4), exact_degree=False)


def test_heights_examples():
    F = P("(t)*x1 + (t^2)*x2")
    assert gauss_valuation(F, ClosedPoint.parse("t")) == 1
    assert mv_height(F) == 1
    assert relevant_height(F) == 2
    G = P("3*x1 - 2/5*x2 + 1")
    assert mv_height(G) == relevant_height(G) == 0
    with pytest.raises(FieldError):
        mv_height(MvPoly.zero(2))


def test_gcd_examples():
    assert is_coprime(P("x1 - 1"), P("x2 - 1"))
    assert mv_gcd(P("(x1+x2)^2"), P("(x1+x2)*x1")) == P("x1 + x2")
    assert mv_gcd(P("x1^2 - t^2", 1), P("x1 - t", 1)) == P("x1 - t", 1)


def test_decompose_examples():
    F = P("(t)*x1^3*x2*(x1+x2)^2")
    dec = dth_power_free_decompose(F, 2)
    assert dec.a == K("t") and dec.monomial == (3, 1)
    assert dec.G == P("x1 + x2") and dec.P == MvPoly.one(2)
    assert dec.is_trivial_form
    H = P("(t)*x1^2 + 3*x2 + 1")
    dec = dth_power_free_decompose(H, 2)
    assert dec.a == K("t") and dec.monomial == (0, 0) and dec.G == MvPoly.one(2)
    assert dec.P == H.monic() and not dec.is_trivial_form
    dec = dth_power_free_decompose(P("x1"), 2)
    assert dec.a == 1 and dec.monomial == (1, 0) and dec.G == dec.P == MvPoly.one(2)


def test_F_e_u_examples():
    u = [K("t"), K("t+1")]
    Q = P("x1 + x2")
    assert F_e_u(FactoredForm.of([(Q, 1)]), u) == D_u(Q, u)
    F2 = FactoredForm.of([(Q, 2)])
    assert F_e_u(F2, u) == D_u(Q, u) * 2
    assert D_u(F2.expand(), u) == Q * D_u(Q, u) * 2
    A, B = P("x1 - 1"), P("x2 + 3")
    assert F_e_u(FactoredForm.of([(A, 1), (B, 1)]), u) == D_u(A, u) * B + A * D_u(B, u)


def test_coprime_criterion_examples():
    c = coprime_criterion_irreducible(P("x1 + x2"), [K("t"), K("3*t")])
    assert not c.coprime and c.gcd_agrees
    assert [w[2] for w in c.witnesses] == [sympy.Rational(1, 3)]
    c = coprime_criterion_irreducible(P("x1 + x2"), [K("t"), K("t+1")])
    assert c.coprime and c.gcd_agrees
    c = coprime_criterion_irreducible(P("x1 + (t)*x2"), [K("t^2"), K("t")])
    assert not c.coprime
    with pytest.raises(ValueError):
        coprime_criterion_irreducible(P("(t)*x1^2"), [K("t"), K("t")])


def test_irreducibility_certificate():
    assert certify_irreducible(P("x1 + (t)*x2 + 1")) is True
    assert certify_irreducible(P("x1^2 + x2^2 + 1")) is True
    assert certify_irreducible(P("x1^2 - x2^2")) is None


def test_parse_round_trip():
    F = P("(t^2+1)*x1^2*x2 + (1/(t-2))*x2")
    assert MvPoly.parse(F.to_str(), 2) == F


@given(seeds, st.integers(1, 3))
def test_gauss_lemma(rnd, n):
    F, G = rand_poly(rnd, n, 4, 2), rand_poly(rnd, n, 4, 2)
    assert mv_height(F * G) == mv_height(F) + mv_height(G)


@given(seeds, st.integers(1, 3))
def test_coefficient_heights(rnd, n):
    F = rand_poly(rnd, n, 3, 2)
    for a in F.coefficients():
        assert height(a) <= relevant_height(F)
        assert relevant_height(F.scale(a.inverse())) == mv_height(F) <= relevant_height(F)


@given(seeds)
def test_gcd_matches_sympy(rnd):
    common = rand_poly(rnd, 2, 2)
    F, G = rand_poly(rnd, 2, 2) * common, rand_poly(rnd, 2, 2) * common
    ours = to_sympy(mv_gcd(F, G))
    theirs = sympy.gcd(to_sympy(F), to_sympy(G))
    ratio = sympy.cancel(ours / theirs)
    assert not (ratio.free_symbols & set(SYMS[1:]))


@given(seeds, st.sampled_from([2, 3]))
def test_decompose_round_trip(rnd, d):
    parts = [rand_poly(rnd, 2, 1) for _ in range(3)]
    F = parts[0] ** rnd.randint(1, 3) * parts[1] ** rnd.randint(1, 4) * parts[2] * MvPoly.monomial((rnd.randint(0, 2), 1))
    dec = dth_power_free_decompose(F, d)
    assert dec.expand() == F
    if d == 2 and not dec.P.is_constant():
        g = dec.P
        for j in range(2):
            dP = dec.P.diff(j)
            if not dP.is_zero():
                g = mv_gcd(g, dP)
        assert g.is_constant()


PAIR_POOL = ["x1 + x2", "x1 - 2*x2 + 1", "x1^2 + x2^2 + 1", "x1*x2 + 1", "(t)*x1 + x2 + 2", "x1^2 + (t)*x2"]


@given(st.sampled_from(PAIR_POOL), seeds)
def test_coprime_criterion_agrees_with_gcd(text, rnd):
    Q = P(text)
    if rnd.random() < 0.4:
        base = gen.rand_unit(rnd, rnd.sample(gen.PLACES, 2))
        u = [base ** rnd.randint(1, 2), base ** rnd.randint(1, 2) * RationalFunction.constant(gen.rand_q(rnd))]
    else:
        u = [gen.rand_unit(rnd, rnd.sample(gen.PLACES, 2)) for _ in range(2)]
    c = coprime_criterion_irreducible(Q, u)
    assert c.gcd_agrees
    assert c.coprime == is_coprime(Q, D_u(Q, u))


@given(seeds)
def test_factored_identity_and_dichotomy(rnd):
    pool = rnd.sample(PAIR_POOL, 2)
    fac = FactoredForm.of([(P(pool[0]), rnd.randint(1, 3)), (P(pool[1]), rnd.randint(1, 2))])
    if rnd.random() < 0.5:
        base = gen.rand_unit(rnd, ["t", "t+1"])
        u = [base, base ** 2]
    else:
        u = [gen.rand_unit(rnd, rnd.sample(gen.PLACES, 2)) for _ in range(2)]
    F = fac.expand()
    cofactor = MvPoly.one(2)
    for Q, e in fac.factors:
        cofactor = cofactor * Q ** (e - 1)
    Feu = F_e_u(fac, u)
    assert D_u(F, u) == cofactor * Feu
    if not mv_gcd(fac.radical(), Feu).is_constant():
        assert find_relation(UnitTuple(u), 2 * fac.degree()) is not None


def test_exact_division():
    rnd = random.Random(3)
    A, B = rand_poly(rnd, 2, 3), rand_poly(rnd, 2, 2)
    assert exact_div(A * B, B) == A
