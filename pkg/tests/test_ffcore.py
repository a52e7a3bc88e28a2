import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ffgcd import (
    INFINITY,
    ClosedPoint,
    FieldError,
    PlaceSet,
    RationalFunction,
    counting,
    divisor,
    gcd_counting,
    height,
    is_dth_power,
    is_S_integer,
    is_S_unit,
    places,
    projective_height,
    valuation,
)
from ffgcd.parsing import ParseError

from conftest import rfs, tpolys

K = RationalFunction.parse
tt = sympy.Symbol("t")


def to_sympy(f: RationalFunction):
    return sympy.sympify(str(f).replace("^", "**"), locals={"t": tt})


def sympy_valuation(f: RationalFunction, p: ClosedPoint) -> int:
    num, den = sympy.fraction(sympy.together(to_sympy(f)))
    if p.is_infinite:
        return sympy.degree(den, tt) - sympy.degree(num, tt)
    q = sympy.Poly(sympy.sympify(str(p).replace("^", "**"), locals={"t": tt}), tt)

    def mult(a):
        a, k = sympy.Poly(a, tt), 0
        while True:
            qq, r = sympy.div(a, q)
            if not r.is_zero:
                return k
            a, k = qq, k + 1

    return mult(num) - mult(den)


def test_valuation_examples():
    f = K("t^2/(t+1)")
    assert valuation(f, ClosedPoint.parse("t")) == 2
    assert valuation(f, INFINITY) == -1
    assert valuation(K("1"), ClosedPoint.parse("t-5")) == 0


def test_height_examples():
    assert height(K("(t^3+1)/(t-2)")) == 3
    assert height(K("7/3")) == 0
    assert height(K("(t^2+1)/(t^2+2)")) == 2
    with pytest.raises(FieldError):
        height(K("0"))


def test_projective_height_examples():
    assert projective_height([K("1"), K("t")]) == 1
    assert projective_height([K("t"), K("t")]) == 0
    assert projective_height([K("t^2"), K("1/(t+1)")]) == 3


def test_counting_examples():
    f = K("t^3*(t-1)")
    assert counting(f, PlaceSet.parse("inf"), "N") == 4
    assert counting(f, PlaceSet.parse("inf"), "Nbar") == 2
    assert counting(K("t^3"), PlaceSet.parse("t,inf"), "N") == 0
    g = K("(t^2+1)^2")
    assert counting(g, PlaceSet.parse(""), "N") == 4
    assert counting(g, PlaceSet.parse(""), "Nbar") == 2


def test_gcd_counting_examples():
    assert gcd_counting(K("t^2*(t-1)"), K("t^3"), PlaceSet.parse("inf"), "N") == 2
    assert gcd_counting(K("t^2+1"), K("t-3"), PlaceSet.parse("inf"), "N") == 0
    assert gcd_counting(K("t^2/(t+1)"), K("t^3*(t+1)"), None, "h") == 2


def test_s_unit_examples():
    assert is_S_unit(K("t/(t+1)"), PlaceSet.parse("t,t+1,inf"))
    assert not is_S_unit(K("t-2"), PlaceSet.parse("t,inf"))
    assert is_S_unit(K("5"), PlaceSet.parse(""))
    assert is_S_integer(K("t^2+1"), PlaceSet.parse("inf"))
    assert not is_S_integer(K("1/t"), PlaceSet.parse("inf"))


def test_dth_power_examples():
    assert is_dth_power(K("t^2/(t+1)^2"), 2)
    assert not is_dth_power(K("t^2*(t+1)"), 2)
    assert is_dth_power(K("7*t^4"), 2)
    assert is_dth_power(K("(t^2+1)^3*(t-1)^6"), 3)
    assert not is_dth_power(K("(t^2+1)^3*(t-1)^6"), 2)


def test_parse_errors():
    for bad in ["t+", "(t", "t^x", "1/0", "s+1"]:
        with pytest.raises((ParseError, FieldError, ZeroDivisionError)):
            K(bad)


def test_places_are_degree_weighted():
    p = ClosedPoint.parse("t^2+1")
    assert p.degree == 2
    assert INFINITY.degree == 1
    with pytest.raises(FieldError):
        ClosedPoint.parse("t^2-1")


@given(rfs())
def test_divisor_has_degree_zero(f):
    assert sum(p.degree * v for p, v in divisor(f).items()) == 0


@given(rfs())
def test_height_is_max_degree(f):
    assert height(f) == max(f.deg_num, f.deg_den)


@given(rfs())
def test_valuations_match_sympy(f):
    for p in places(f) + [ClosedPoint.parse("t-7")]:
        assert valuation(f, p) == sympy_valuation(f, p)


@given(rfs(3), rfs(3), st.integers(1, 4))
def test_height_laws(f, g, n):
    assert height(f * g) <= height(f) + height(g)
    assert height(f**n) == n * height(f)
    assert height(f.inverse()) == height(f)


@given(tpolys(4), tpolys(4), st.sampled_from(["", "inf", "t", "t,t+1,inf", "t^2+1,inf"]))
def test_h_gcd_splits_over_S(f, g, text):
    S = PlaceSet.parse(text)
    inside = 0
    for p in S:
        inside += p.degree * min(max(valuation(f, p), 0), max(valuation(g, p), 0))
    assert gcd_counting(f, g, None, "h") == gcd_counting(f, g, S, "N") + inside


@given(tpolys(3), st.integers(2, 4), st.fractions(min_value=-5, max_value=5).filter(bool))
def test_dth_power_scaling(f, d, c):
    assert is_dth_power(f**d * RationalFunction.constant(c), d)
