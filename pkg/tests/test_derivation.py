import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffgcd import INFINITY, ClosedPoint, FieldError, PlaceSet, RationalFunction
from ffgcd.derivation import (
    D_u,
    derivative_gcd_check,
    derivative_gcd_fact,
    derive,
    local_valuation_of_derivative,
    log_derivative_height_check,
)
from ffgcd.harness import generators as gen
from ffgcd.mvpoly import MvPoly

from conftest import rfs, seeds

K = RationalFunction.parse


def test_derive_examples():
    assert derive(K("t^3")) == K("3*t^2")
    assert derive(K("1/(t+1)")) == K("-1/(t+1)^2")
    assert derive(K("5/7")).is_zero()


def test_local_valuation_examples():
    assert local_valuation_of_derivative(K("t^3"), ClosedPoint.parse("t")) == 2
    assert local_valuation_of_derivative(K("t^3"), INFINITY) == -2
    assert local_valuation_of_derivative(K("t+1"), ClosedPoint.parse("t")) >= 0
    with pytest.raises(FieldError):
        local_valuation_of_derivative(K("3"), INFINITY)


def test_D_u_examples():
    F = MvPoly.parse("x1^2 + x2^2", 2)
    u = [K("t"), K("t+1")]
    expect = MvPoly.parse("(2/t)*x1^2 + (2/(t+1))*x2^2", 2)
    assert D_u(F, u) == expect
    assert D_u(MvPoly.parse("7", 2), u).is_zero()
    X = MvPoly.parse("x1", 1)
    assert D_u(X, [K("t")]) == MvPoly.parse("(1/t)*x1", 1)
    assert X.evaluate([K("t")]).derivative() == D_u(X, [K("t")]).evaluate([K("t")]) == 1
    with pytest.raises(ValueError):
        D_u(F, [K("t")])


def test_derivative_gcd_examples():
    r = derivative_gcd_check(K("t^3"), PlaceSet.parse(""))
    assert (r.lhs, r.rhs, r.margin) == (2, 2, 0)
    r = derivative_gcd_check(K("t*(t-1)"), PlaceSet.parse("inf"))
    assert (r.lhs, r.rhs) == (0, 0)
    r = log_derivative_height_check([K("t"), K("t+1")], PlaceSet.parse("t,t+1,inf"))
    assert (r.lhs, r.rhs) == (2, 3)
    with pytest.raises(FieldError):
        derivative_gcd_check(K("4"), PlaceSet.parse(""))
    with pytest.raises(FieldError):
        log_derivative_height_check([K("t-3")], PlaceSet.parse("t,inf"))


@given(rfs(3), rfs(3), st.integers(1, 4))
def test_leibniz_and_powers(f, g, n):
    assert derive(f * g) == derive(f) * g + f * derive(g)
    assert derive(f + g) == derive(f) + derive(g)
    assert derive(f**n) == f ** (n - 1) * derive(f) * n


@given(seeds, st.integers(1, 3))
def test_value_identity_and_product_rule(rnd, n):
    u = [gen.rand_unit(rnd, rnd.sample(gen.PLACES, 2)) for _ in range(n)]
    F = gen.rand_mvpoly(rnd, n, rnd.randint(1, 4), gen.poly_coeff(rnd, 1), exact_degree=False)
    G = gen.rand_mvpoly(rnd, n, rnd.randint(1, 3), gen.poly_coeff(rnd, 1), exact_degree=False)
    assert F.evaluate(u).derivative() == D_u(F, u).evaluate(u)
    assert D_u(F * G, u) == D_u(F, u) * G + F * D_u(G, u)


@given(rfs(4))
def test_derivative_gcd_margin(f):
    if f.is_constant():
        return
    for S in ("", "inf", "t,inf"):
        assert derivative_gcd_check(f, PlaceSet.parse(S)).margin >= 0
    for p in [INFINITY, ClosedPoint.parse("t"), ClosedPoint.parse("t+1")]:
        local_valuation_of_derivative(f, p)


@given(seeds)
def test_log_derivative_height_margin(rnd):
    names = rnd.sample(gen.PLACES, 3)
    etas = [gen.rand_unit(rnd, names) for _ in range(rnd.randint(1, 3))]
    S = gen.support_with_inf(*etas)
    assert log_derivative_height_check(etas, S).margin >= 0


@given(rfs(3), st.sampled_from([2, 3]))
def test_dth_power_pole_count(g, d):
    if g.is_constant():
        return
    lhs, rhs = derivative_gcd_fact(g, d, PlaceSet.parse("inf"))
    assert lhs >= rhs
