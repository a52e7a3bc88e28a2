"""The derivation d/dt on K, local orders of derivatives, and D_u.

At genus 0 with t the coordinate, the local derivative d_p t is a unit at
every finite place and has a double pole at infinity (dt/d(1/t) = -t^2).
Local orders of derivatives are always computed by differentiating and
taking valuations; the two-case relation between v_p(f) and v_p(f') is
checked against that, never used to compute it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ffcore import (
    DEFAULT_FIELD,
    ONE,
    ClosedPoint,
    FieldContext,
    FieldError,
    PlaceSet,
    RationalFunction,
    counting,
    gcd_counting,
    is_S_unit,
    projective_height,
    valuation,
)
from .mvpoly import MvPoly


def derive(f) -> RationalFunction:
    return RationalFunction.coerce(f).derivative()


def log_derivative(f) -> RationalFunction:
    f = RationalFunction.coerce(f)
    if f.is_zero():
        raise FieldError("logarithmic derivative of 0")
    return f.derivative() / f


@dataclass(frozen=True)
class DerivationContext:
    """The separating element t and the orders v_p(d_p t)."""

    field: FieldContext = DEFAULT_FIELD

    def v_dt(self, p: ClosedPoint) -> int:
        return -2 if p.is_infinite else 0

    def zero_count_of_dt(self) -> int:
        """Sum over all places of v_p^0(d_p t); never more than 3g."""
        return 0


DEFAULT_DERIVATION = DerivationContext()


def local_valuation_of_derivative(f, p: ClosedPoint, ctx: DerivationContext = DEFAULT_DERIVATION):
    """v_p(f') by direct computation, asserting the two-case relation."""
    f = RationalFunction.coerce(f)
    if f.is_constant():
        raise FieldError("local derivative order needs a nonconstant element")
    v = valuation(f, p)
    vd = valuation(f.derivative(), p)
    w = ctx.v_dt(p)
    if v != 0:
        if vd != v - 1 - w:
            raise AssertionError(f"v_p(f') = {vd} but v_p(f) - 1 - v(d_p t) = {v - 1 - w} at {p}")
    elif vd < -w:
        raise AssertionError(f"v_p(f') = {vd} < -v(d_p t) = {-w} at {p}")
    return vd


def unit_values(u, nvars: int | None = None) -> list[RationalFunction]:
    """Entries of a unit tuple (UnitTuple or plain sequence) as K-elements."""
    entries = getattr(u, "entries", u)
    vals = [RationalFunction.coerce(x) for x in entries]
    if nvars is not None and len(vals) != nvars:
        raise ValueError(f"unit tuple has {len(vals)} entries, polynomial has {nvars} variables")
    if any(x.is_zero() for x in vals):
        raise FieldError("unit tuple entries must be nonzero")
    return vals


def D_u(F: MvPoly, u) -> MvPoly:
    """sum_i (a_i u^i)'/u^i x^i, computed as (a_i' + a_i sum_k i_k u_k'/u_k) x^i."""
    us = unit_values(u, F.nvars)
    logs = [x.derivative() / x for x in us]
    terms = {}
    for i, a in F.terms.items():
        c = a.derivative()
        s = None
        for lk, e in zip(logs, i):
            if e:
                s = lk * e if s is None else s + lk * e
        if s is not None:
            c = c + a * s
        terms[i] = c
    return MvPoly(terms, F.nvars)


@dataclass(frozen=True)
class DerivativeGcdReport:
    lhs: int
    rhs: int
    margin: int
    kind: str
    details: dict


def derivative_gcd_check(eta, S: PlaceSet, genus: int = 0) -> DerivativeGcdReport:
    """Lower bound N_{S,gcd}(eta, eta') >= N_S(eta) - Nbar_S(eta) - 3g."""
    eta = RationalFunction.coerce(eta)
    if eta.is_constant():
        raise FieldError("the derivative gcd bound needs a nonconstant element")
    d = eta.derivative()
    lhs = gcd_counting(eta, d, S, mode="N")
    n = counting(eta, S, "N")
    nbar = counting(eta, S, "Nbar")
    rhs = n - nbar - 3 * genus
    return DerivativeGcdReport(lhs, rhs, lhs - rhs, "gcd", {"N_S": n, "Nbar_S": nbar})


def log_derivative_height_check(etas: Sequence, S: PlaceSet, genus: int = 0) -> DerivativeGcdReport:
    """Height of logarithmic derivatives: h(1, eta_1'/eta_1, ...) <= |S| + 3g for S-units eta_i."""
    etas = [RationalFunction.coerce(e) for e in etas]
    for e in etas:
        if not is_S_unit(e, S):
            raise FieldError(f"{e} is not an S-unit for S = {{{S}}}")
    lhs = projective_height([ONE] + [log_derivative(e) for e in etas])
    rhs = S.size + 3 * genus
    return DerivativeGcdReport(lhs, rhs, rhs - lhs, "log-height", {"S_size": S.size})


def derivative_gcd_fact(g, d: int, S: PlaceSet, genus: int = 0) -> tuple[int, Fraction]:
    """(N_{S,gcd}(g^d, (g^d)'), (d-1) N_S(g) - 3g) for the d-th power count."""
    g = RationalFunction.coerce(g)
    gd = g**d
    lhs = gcd_counting(gd, gd.derivative(), S, mode="N") if not gd.is_constant() else 0
    rhs = (d - 1) * counting(g, S, "N") - 3 * genus
    return lhs, Fraction(rhs)


__all__ = [
    "DerivationContext",
    "DEFAULT_DERIVATION",
    "D_u",
    "DerivativeGcdReport",
    "derivative_gcd_fact",
    "derive",
    "derivative_gcd_check",
    "log_derivative_height_check",
    "local_valuation_of_derivative",
    "log_derivative",
    "unit_values",
]
