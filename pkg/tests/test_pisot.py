import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffgcd import FieldError, RationalFunction
from ffgcd.harness.suites import _gen_pisot, _pisot_input
from ffgcd.mvpoly import MvPoly
from ffgcd.pisot import (
    ExpPoly,
    HypothesisError,
    InsufficientWitnesses,
    buchi_threshold,
    coprime_specialization_guard,
    divisor_identity_holds,
    dth_power_density,
    gamma_basis,
    laurent_model,
    pisot_factor,
)

K = RationalFunction.parse


def test_eval_examples():
    assert ExpPoly.parse("(T + t ; t^2)").eval(3) == K("(3+t)*t^6")
    assert ExpPoly.parse("(0 ; t)").eval(4).is_zero()
    a, b = ExpPoly.parse("(T ; t)"), ExpPoly.parse("(2 ; t+1) (T^2 ; 3)")
    both = ExpPoly(a.terms + b.terms)
    for n in range(6):
        assert both.eval(n) == a.eval(n) + b.eval(n)


def test_gamma_basis_examples():
    gb = gamma_basis([K("t^2"), K("t^3")])
    assert [str(u) for u in gb.units.entries] == ["t"]
    assert gb.exponents == ((2,), (3,))
    gb = gamma_basis([K("t"), K("t+1")])
    assert len(gb.units.entries) == 2
    with pytest.raises(HypothesisError):
        gamma_basis([K("t"), K("2*t")])


def test_laurent_model_examples():
    b = ExpPoly.parse("(T + t ; t^2)")
    model = laurent_model(b)
    assert model.f == MvPoly.parse("x0*x1 + (t)*x1", 2, ["x0", "x1"])
    assert model.h == 0
    inv = ExpPoly.parse("(1 ; 1/t)")
    model = laurent_model(inv, 2)
    for m in range(11):
        assert model.value(m) == inv.eval(m)
    assert laurent_model(ExpPoly.parse("(5 ; 1)")).f.is_constant()


def test_density_examples():
    sq = ExpPoly.parse("(T^2 + 2*t*T + t^2 ; t^2)")
    assert dth_power_density(sq, 2, range(21)) == list(range(21))
    assert dth_power_density(ExpPoly.parse("(1 ; t)"), 2, range(11)) == [0, 2, 4, 6, 8, 10]
    assert dth_power_density(ExpPoly.parse("(T ; t^2)"), 2, range(11)) == list(range(11))


@given(st.integers(0, 2**32), st.fractions(min_value=1, max_value=7))
def test_density_constant_scaling(seed, c):
    inst = _gen_pisot(random.Random(seed), {})
    b = _pisot_input(inst)
    d = inst["d"]
    assert dth_power_density(b, d, range(8)) == dth_power_density(b.scale(RationalFunction.constant(c)), d, range(8))


def test_worked_factorizations():
    fac = pisot_factor(ExpPoly.parse("(T^2 + 2*t*T + t^2 ; t^2)"), 2)
    out = fac.to_dict()
    assert (out["R"], out["Q1"], out["G"], out["gamma2_power"]) == ("1", "T + (t)", "1", "t^2")
    fac = pisot_factor(ExpPoly.parse("(T ; t^2)"), 2)
    assert fac.to_dict()["R"] == "T" and fac.R_in_k
    fac = pisot_factor(ExpPoly.parse("(1 ; t)"), 2)
    assert fac.to_dict()["gamma2_power"] == "t"
    assert fac.a_core(5) == 1


def test_factorization_errors():
    with pytest.raises(HypothesisError):
        pisot_factor(ExpPoly.parse("(1 ; t) (1 ; t+1)"), 2)
    with pytest.raises(InsufficientWitnesses):
        pisot_factor(ExpPoly.parse("(1 ; t)"), 2, M_cap=20)
    with pytest.raises(ValueError):
        pisot_factor(ExpPoly.parse("(1 ; t)"), 1)


def test_buchi_threshold():
    assert [buchi_threshold(n) for n in (1, 2, 3)] == [8, 19, 30]
    assert buchi_threshold(2, genus=2) == 4 * 2 + 19


def test_specialization_guard():
    names = ["x0", "x1"]
    ok = coprime_specialization_guard(MvPoly.parse("x1 - x0", 2, names), MvPoly.parse("x1 - t", 2, names), range(11))
    assert ok.failures == []
    bad = coprime_specialization_guard(MvPoly.parse("x1 - x0", 2, names), MvPoly.parse("x1 - 5", 2, names), range(11))
    assert bad.failures == [5]
    with pytest.raises((ValueError, FieldError)):
        coprime_specialization_guard(MvPoly.parse("x1 - x0", 2, names), MvPoly.parse("x1 - x0", 2, names), range(3))


@given(st.integers(0, 2**32))
def test_round_trip(seed):
    inst = _gen_pisot(random.Random(seed), {})
    b = _pisot_input(inst)
    fac = pisot_factor(b, inst["d"])
    assert all(divisor_identity_holds(fac, b, m) for m in range(11))
    R = MvPoly.parse(inst["R"], 1, ["T"])
    assert fac.R.total_degree() == R.total_degree()
