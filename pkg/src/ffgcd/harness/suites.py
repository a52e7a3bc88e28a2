"""Named suites: a generator, a verifier and default parameters each.

Generated instances are plain JSON; every verifier rebuilds its objects
from that JSON, so a verdict can be recomputed from the report alone.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..derivation import D_u
from ..divlattice import UnitTuple, find_relation, l1_vectors
from ..ffcore import INFINITY, ONE, PlaceSet, RationalFunction, T, is_dth_power
from ..mvpoly import FactoredForm, MvPoly
from ..pisot import ExpPoly, HypothesisError, InsufficientWitnesses, divisor_identity_holds, pisot_factor
from ..refinement import (
    Caps,
    CapExceeded,
    build_ideal_basis,
    ideal_dimension_probe,
    key_inequality_check,
    s_part_check,
)
from . import generators as gen
from .verdicts import (
    STATUSES,
    Verdict,
    num,
    vanishing_subsums,
    verify_brownawell_masser,
    verify_derivative_gcd,
    verify_divisor_degree,
    verify_dth_power_count,
    verify_du_height,
    verify_gcd_powers,
    verify_gcd_two_units,
    verify_gcd_unit_values,
    verify_green,
    verify_identities,
    verify_log_derivative_height,
)


@dataclass
class InstanceSpec:
    suite: str
    seed: int = 1
    count: int = 10
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Suite:
    name: str
    generate: Callable[[random.Random, dict], dict]
    verify: Callable[[dict, dict, str], Verdict]
    defaults: dict
    doc: str


SUITES: dict[str, Suite] = {}


def suite(name: str, doc: str, **defaults):
    def register(pair):
        generate, verify = pair
        SUITES[name] = Suite(name, generate, verify, defaults, doc)
        return pair

    return register


def K(s: str) -> RationalFunction:
    return RationalFunction.parse(s)


def Ks(xs) -> list[RationalFunction]:
    return [K(x) for x in xs]


def P(s: str, n: int) -> MvPoly:
    return MvPoly.parse(s, n)


def strs(xs) -> list[str]:
    return [str(x) for x in xs]


def rand_places(rng: random.Random, k: int) -> list[str]:
    return rng.sample(gen.PLACES, k)


# exact identities ---------------------------------------------------------------
def _gen_identities(rng, prm):
    n = rng.randint(1, prm["max_n"])
    coeff = gen.poly_coeff(rng, 2)
    F = gen.rand_mvpoly(rng, n, rng.randint(1, 2), coeff)
    G = gen.rand_mvpoly(rng, n, rng.randint(1, 2), coeff)
    u = [gen.rand_unit(rng, rand_places(rng, 2), 2) for _ in range(n)]
    return {"n": n, "F": F.to_str(), "G": G.to_str(), "u": strs(u)}


def _ver_identities(inst, prm, iid):
    n = inst["n"]
    return verify_identities(P(inst["F"], n), P(inst["G"], n), Ks(inst["u"]), iid)


suite("identities", "Gauss lemma, D_u value identity and product rule", max_n=3)((_gen_identities, _ver_identities))


def _gen_divisor(rng, prm):
    return {"f": str(gen.rand_rf(rng, prm["max_deg"], 5))}


def _ver_divisor(inst, prm, iid):
    return verify_divisor_degree(K(inst["f"]), iid)


suite("divisor-degree", "sum of weighted valuations of f is zero", max_deg=6)((_gen_divisor, _ver_divisor))


# unit equations ------------------------------------------------------------------
def _gen_brownawell(rng, prm):
    def draw():
        if rng.random() < 0.3:
            k = rng.randint(1, 6)
            c = RationalFunction.constant(gen.rand_q(rng))
            fs = [c * T**k, ONE - c * T**k]
        else:
            n = rng.randint(2, prm["max_n"])
            parts = [gen.rand_tpoly(rng, rng.randint(0, prm["max_deg"])) for _ in range(n)]
            total = sum(parts[1:], parts[0])
            if total.is_zero():
                return None
            fs = [a / total for a in parts]
        if vanishing_subsums(fs + [RationalFunction.constant(-1)]):
            return None
        S = gen.support_with_inf(*fs)
        return {"f": strs(fs), "S": str(S)}

    return gen.retry(draw)


def _ver_brownawell(inst, prm, iid):
    return verify_brownawell_masser(Ks(inst["f"]), PlaceSet.parse(inst["S"]), 0, iid)


suite("brownawell", "S-unit equations summing to one", max_n=4, max_deg=3)((_gen_brownawell, _ver_brownawell))


def _gen_green(rng, prm):
    ell = rng.randint(1, prm["max_ell"])
    mode = rng.choice(["const2", "const3", "ratio2", "ratio3"])
    f = gen.rand_tpoly(rng, 2)
    while f.is_constant():
        f = gen.rand_tpoly(rng, 2)
    q = lambda: RationalFunction.constant(gen.rand_q(rng))
    if mode == "const2":
        c, a1 = q(), q()
        a, fs = [a1, -a1 / c**ell], [f, c * f]
    elif mode == "const3":
        while True:
            c1, c2, c3, a1, a2 = q(), q(), q(), q(), q()
            a3 = -(a1 * c1**ell + a2 * c2**ell) / c3**ell
            if not a3.is_zero():
                break
        a, fs = [a1, a2, a3], [c1 * f, c2 * f, c3 * f]
    elif mode == "ratio2":
        a, fs = [ONE, -(T**ell)], [f * T, f]
    else:
        a1, a2 = q(), q()
        a, fs = [a1, a2, -(a1 * T**ell + a2)], [T, ONE, ONE]
    return {"a": strs(a), "f": strs(fs), "ell": ell, "mode": mode}


def _ver_green(inst, prm, iid):
    return verify_green(Ks(inst["a"]), Ks(inst["f"]), inst["ell"], 0, iid)


suite("green", "weighted power sums with constant ratios above the threshold", max_ell=12)((_gen_green, _ver_green))


# derivatives ---------------------------------------------------------------------
def _subset(rng, S: PlaceSet) -> PlaceSet:
    return PlaceSet([p for p in S if rng.random() < 0.5])


def _gen_derivative_gcd(rng, prm):
    if rng.random() < 0.05:
        return {"eta": "t^3", "S": ""}
    while True:
        eta = gen.rand_unit(rng, rand_places(rng, 2), 4) * gen.rand_tpoly(rng, 2)
        if not eta.is_constant():
            break
    return {"eta": str(eta), "S": str(_subset(rng, gen.support_with_inf(eta)))}


def _ver_derivative_gcd(inst, prm, iid):
    return verify_derivative_gcd(K(inst["eta"]), PlaceSet.parse(inst["S"]), 0, iid)


suite("derivative-gcd", "gcd of eta and eta' bounded below by N_S - Nbar_S")((_gen_derivative_gcd, _ver_derivative_gcd))


def _gen_log_height(rng, prm):
    etas = [gen.rand_unit(rng, rand_places(rng, 2), 3) for _ in range(rng.randint(1, 3))]
    extra = PlaceSet([p for p in gen.support_with_inf(K(rng.choice(gen.PLACES)))])
    return {"eta": strs(etas), "S": str(gen.support_with_inf(*etas) | extra)}


def _ver_log_height(inst, prm, iid):
    return verify_log_derivative_height(Ks(inst["eta"]), PlaceSet.parse(inst["S"]), 0, iid)


suite("log-derivative-height", "height of logarithmic derivatives of S-units")((_gen_log_height, _ver_log_height))


def _gen_du_height(rng, prm):
    n = rng.randint(2, 3)
    F = gen.rand_mvpoly(rng, n, rng.randint(1, 2), lambda: gen.rand_rf(rng, 2), terms=rng.randint(1, 4))
    u = [gen.rand_unit(rng, rand_places(rng, 2), 3) for _ in range(n)]
    S = gen.support_with_inf(*u)
    if rng.random() < 0.5:
        S = S | PlaceSet.support(K(rng.choice(gen.PLACES)))
    return {"n": n, "F": F.to_str(), "u": strs(u), "S": str(S)}


def _ver_du_height(inst, prm, iid):
    n = inst["n"]
    return verify_du_height(P(inst["F"], n), Ks(inst["u"]), PlaceSet.parse(inst["S"]), 0, iid)


suite("du-height", "height of D_u(F) for S-unit u")((_gen_du_height, _ver_du_height))


# d-th power values -----------------------------------------------------------------
def _gen_dth_power_count(rng, prm):
    eps = rng.choice([Fraction(1, 2), Fraction(1), Fraction(2), Fraction(10)])
    mode = rng.choice(["linear", "linear", "two-factor", "relation"])
    if mode == "relation":
        k = rng.randint(1, 4)
        u = [T**k, T ** (2 * k)]
        return {"mode": mode, "factors": [["2*x1^2 - x2 + 2*x1 + 1", 1]], "u": strs(u), "d": 2,
                "eps": num(eps), "S": "t,inf"}

    def draw():
        if mode == "linear":
            d = rng.choice([2, 3])
            c, e = gen.rand_q(rng), gen.rand_q(rng, nonzero=False)
            Pl = MvPoly.parse(f"x2 + ({c})*x1 + ({e})", 2)
            u1 = gen.rand_unit(rng, rand_places(rng, 2), 2)
            g = gen.rand_tpoly(rng, rng.randint(1, 2))
            u2 = g**d - u1 * c - e
            if u2.is_zero():
                return None
            factors = [[Pl.to_str(), 1]]
        else:
            d = 3
            c = RationalFunction.constant(gen.rand_q(rng))
            g1, g2 = gen.rand_tpoly(rng, 1), gen.rand_tpoly(rng, 1)
            A, B = c * g1**3, c * g2**3
            u1, u2 = (A + B) / 2, (A - B) / 2
            if u1.is_zero() or u2.is_zero():
                return None
            factors = [["x1 + x2", 1], ["x1 - x2", 2]]
        S = gen.support_with_inf(u1, u2)
        return {"mode": mode, "factors": factors, "u": strs([u1, u2]), "d": d, "eps": num(eps), "S": str(S)}

    return gen.retry(draw)


def _ver_dth_power_count(inst, prm, iid):
    ff = FactoredForm.of([(P(s, 2), e) for s, e in inst["factors"]])
    return verify_dth_power_count(ff, Ks(inst["u"]), PlaceSet.parse(inst["S"]), inst["d"],
                                  Fraction(inst["eps"]), 0, iid)


suite("dth-power-count", "N_S of a d-th power value F(u) or a small power product of u")(
    (_gen_dth_power_count, _ver_dth_power_count))


# gcd of F(g), G(g) -------------------------------------------------------------------
def _units(rng, n, places=2, emax=3):
    return [gen.rand_unit(rng, rand_places(rng, places), emax) for _ in range(n)]


def _gen_gcd_units(rng, prm):
    n = rng.randint(2, prm["max_vars"])
    d = rng.randint(1, 2) if n == 2 else 1
    coeff = gen.const_coeff(rng) if rng.random() < 0.6 else gen.poly_coeff(rng, 1)
    F, G = gen.coprime_pair(rng, n, d, coeff, unit_coefficient=False)
    g = _units(rng, n)
    if rng.random() < 0.2:
        g[1] = g[0] ** 2 * RationalFunction.constant(gen.rand_q(rng))
    S = gen.support_with_inf(*g)
    return {"n": n, "F": F.to_str(), "G": G.to_str(), "g": strs(g), "S": str(S), "eps": num(prm["eps"])}


def _ver_gcd_units(inst, prm, iid):
    n = inst["n"]
    return verify_gcd_unit_values(P(inst["F"], n), P(inst["G"], n), Ks(inst["g"]), PlaceSet.parse(inst["S"]),
                                  Fraction(inst["eps"]), 0, iid, max_n=prm["max_n"], max_m=prm["max_m"])


suite("gcd-units", "gcd of F(g) and G(g) at S-unit points", eps=Fraction(8), max_vars=3, max_n=3, max_m=8)(
    (_gen_gcd_units, _ver_gcd_units))

TWO_UNIT_S = "t,t+1,inf"


def _gen_gcd_two_units(rng, prm):
    def draw():
        g = []
        for _ in range(2):
            sign = rng.choice([-1, 1])
            a, b = sign * rng.randint(prm["min_exp"], prm["max_exp"]), sign * rng.randint(prm["min_exp"], prm["max_exp"])
            g.append(RationalFunction.constant(gen.rand_q(rng)) * T**a * (T + 1) ** b)
        if any(x.is_constant() for x in g):
            return None
        F, G = gen.coprime_pair(rng, 2, 1, gen.const_coeff(rng), unit_coefficient=False)
        return {"F": F.to_str(), "G": G.to_str(), "g": strs(g), "S": TWO_UNIT_S, "eps": num(prm["eps"])}

    return gen.retry(draw)


def _ver_gcd_two_units(inst, prm, iid):
    return verify_gcd_two_units(P(inst["F"], 2), P(inst["G"], 2), Ks(inst["g"]), PlaceSet.parse(inst["S"]),
                                Fraction(inst["eps"]), 0, iid)


suite("gcd-two-units", "constant coefficients, two units, explicit height threshold", eps=Fraction(4), min_exp=15, max_exp=60)(
    (_gen_gcd_two_units, _ver_gcd_two_units))


def _gen_gcd_powers(rng, prm):
    ell = rng.randint(1, prm["max_ell"])
    if rng.random() < 0.25:
        return {"F": "x1 - 1", "G": "x2 - 1", "g": ["t", "t+1"], "ell": ell, "eps": num(prm["eps"])}
    coeff = gen.const_coeff(rng) if rng.random() < 0.6 else gen.poly_coeff(rng, 1)
    F, G = gen.coprime_pair(rng, 2, 1, coeff, unit_coefficient=False)
    g = [gen.rand_tpoly(rng, rng.randint(1, 2)) for _ in range(2)]
    while any(x.is_constant() for x in g):
        g = [gen.rand_tpoly(rng, rng.randint(1, 2)) for _ in range(2)]
    return {"F": F.to_str(), "G": G.to_str(), "g": strs(g), "ell": ell, "eps": num(prm["eps"])}


def _ver_gcd_powers(inst, prm, iid):
    return verify_gcd_powers(P(inst["F"], 2), P(inst["G"], 2), Ks(inst["g"]), inst["ell"],
                             Fraction(inst["eps"]), 0, iid)


suite("gcd-powers", "gcd of F(g^ell) and G(g^ell) with S the support of g", eps=Fraction(4), max_ell=30)(
    (_gen_gcd_powers, _ver_gcd_powers))


# refinement -------------------------------------------------------------------------
def _gen_refinement(rng, prm):
    d = rng.choice([1, 1, 2])
    m = rng.randint(2 * d, min(prm["max_m"], 2 * d + 2))
    r = rng.randint(1, prm["max_r"])
    coeff = gen.const_coeff(rng) if rng.random() < 0.8 else gen.poly_coeff(rng, 1)
    F1, F2 = gen.coprime_pair(rng, 2, d, coeff)

    def draw():
        if rng.random() < 0.5:
            A = rng.randint(2, 6) * (m + 1)
            g = [RationalFunction.constant(gen.rand_q(rng)) * T**A, (T + 1) * T ** (A * (m + 1))]
        else:
            g = _units(rng, 2, 2, 3)
        if F1.evaluate(g).is_zero() or F2.evaluate(g).is_zero():
            return None
        return g

    g = gen.retry(draw)
    S = gen.support_with_inf(*g)
    return {"F1": F1.to_str(), "F2": F2.to_str(), "g": strs(g), "S": str(S), "m": m, "r": r}


def _ver_refinement(inst, prm, iid):
    F1, F2 = P(inst["F1"], 2), P(inst["F2"], 2)
    caps = Caps(max_m=prm["max_m"], max_r=prm["max_r"])
    rep = key_inequality_check(F1, F2, Ks(inst["g"]), PlaceSet.parse(inst["S"]), inst["m"], inst["r"], 0, caps)
    basis = build_ideal_basis(F1, F2, inst["m"], caps)
    probe = ideal_dimension_probe(F1, F2, inst["m"], 1)
    details = rep.to_dict()
    details["top_forms_coprime"] = basis.top_forms_coprime
    details["ideal_probe_gap"] = probe.gap
    M = rep.params["M"]
    lhs = M * rep.params["N_gcd"]
    gb = rep.margins.get("gcd_bound")
    rhs = lhs + gb if gb is not None else None
    codim_ok = rep.codimension == rep.M_prime
    if rep.finding or not codim_ok:
        status = "FINDING"
    elif rep.branch == "gcd-bound" and rep.nondegenerate:
        status = "pass"
    elif rep.branch == "cap-exceeded":
        status = "cap-exceeded"
    else:
        status = "precondition-unmet"
    branch = rep.branch if status != "pass" else "gcd-bound"
    if status == "FINDING" and branch not in ("gcd-bound", "precondition-unmet", "cap-exceeded"):
        branch = "gcd-bound"
    return Verdict(iid, lhs, rhs, branch, status, inst, {}, details)


suite("refinement", "linear forms for (F1, F2)_m and the full inequality chain", max_m=6, max_r=2)(
    (_gen_refinement, _ver_refinement))


def _gen_s_part(rng, prm):
    def draw():
        d = rng.randint(1, 2)
        coeff = gen.const_coeff(rng) if rng.random() < 0.8 else gen.poly_coeff(rng, 1)
        F = gen.rand_mvpoly(rng, 2, d, coeff, terms=3).monic()
        if F.constant_coeff().is_zero():
            F = F + MvPoly.constant(ONE, 2)
        g = _units(rng, 2, 2, 3)
        if F.evaluate(g).is_zero():
            return None
        return {"F": F.to_str(), "g": strs(g), "S": str(gen.support_with_inf(*g)), "r": rng.randint(1, prm["max_r"])}

    return gen.retry(draw)


def _ver_s_part(inst, prm, iid):
    rep = s_part_check(P(inst["F"], 2), Ks(inst["g"]), PlaceSet.parse(inst["S"]), inst["r"], 0,
                       Caps(max_r=prm["max_r"]))
    details = {"w": rep.w, "u": rep.u, "N": rep.N}
    if rep.branch == "gcd-bound":
        st = "pass" if rep.margin >= 0 else "FINDING"
        return Verdict(iid, rep.lhs, rep.rhs, "gcd-bound", st, inst, {}, details)
    return Verdict(iid, rep.lhs, rep.rhs, rep.branch, rep.branch, inst, {}, details)


suite("s-part", "S-part of F(g) against the d-uple embedding bound", max_r=2)((_gen_s_part, _ver_s_part))


# oracle agreement ------------------------------------------------------------------------
def dth_power_oracle(f: RationalFunction, d: int) -> bool:
    """Full factorization over Q: every multiplicity (and the order at infinity) divisible by d."""
    for poly in (f.num, f.den):
        _, facs = poly.factor()
        if any(e % d for _, e in facs):
            return False
    return (f.deg_den - f.deg_num) % d == 0


def _gen_dth_power(rng, prm):
    d = rng.choice([2, 3, 4])
    power = rng.random() < 0.5

    def product(k):
        out = ONE
        for p in rng.sample(gen.IRREDUCIBLES, k):
            e = d * rng.randint(1, 2) if power else rng.randint(1, 8)
            out = out * K(p) ** e
        return out

    f = RationalFunction.constant(gen.rand_q(rng)) * product(rng.randint(1, 3))
    if rng.random() < 0.3:
        f = f / product(rng.randint(1, 2))
    return {"f": str(f), "d": d}


def _ver_dth_power(inst, prm, iid):
    f, d = K(inst["f"]), inst["d"]
    got, want = is_dth_power(f, d), dth_power_oracle(f, d)
    return Verdict(iid, int(got), int(want), "gcd-bound", "pass" if got == want else "FINDING", inst, {},
                   {"is_dth_power": got, "oracle": want})


suite("dth-power", "d-th power test against full factorization")((_gen_dth_power, _ver_dth_power))


def exhaustive_relation(g, bound: int):
    """Least l1 norm of a nonzero m with prod g_i^{m_i} constant, by enumeration."""
    best = None
    ut = UnitTuple(g)
    for m in l1_vectors(len(g), bound):
        l1 = sum(abs(x) for x in m)
        if best is not None and l1 >= best:
            continue
        if ut.power_product(m).is_constant():
            best = l1
    return best


def _gen_relation(rng, prm):
    k = rng.randint(2, 3)
    places = rand_places(rng, rng.randint(1, 3))
    g = [gen.rand_unit(rng, places, 2) for _ in range(k)]
    if rng.random() < 0.5:
        a = [rng.randint(-2, 2) for _ in range(k - 1)]
        w = RationalFunction.constant(gen.rand_q(rng))
        for x, e in zip(g, a):
            w = w * x**e
        if not w.is_constant():
            g[-1] = w
    return {"g": strs(g), "bound": prm["bound"]}


def _ver_relation(inst, prm, iid):
    g, bound = Ks(inst["g"]), inst["bound"]
    rel = find_relation(UnitTuple(g), bound)
    got = rel.l1_norm if rel is not None else None
    want = exhaustive_relation(g, bound)
    ok = got == want
    witness = {"exponents": list(rel.exponents), "constant": num(rel.witness)} if rel is not None else {}
    branch = "relation" if rel is not None else "gcd-bound"
    return Verdict(iid, got if got is not None else 0, want if want is not None else 0, branch,
                   ("relation" if rel is not None else "pass") if ok else "FINDING", inst, witness,
                   {"find_relation": got, "exhaustive": want})


suite("relation", "lattice relation search against exhaustive enumeration", bound=6)((_gen_relation, _ver_relation))


# pisot ----------------------------------------------------------------------------
def exp_mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return ExpPoly([(A * B, x * y) for A, x in a.terms for B, y in b.terms])


PISOT_BASES = ["t", "t+1", "t^2", "(t+1)/t", "(t-1)^2", "t^2+t"]


def _gen_pisot(rng, prm):
    d = rng.choice([2, 3])
    betas = rng.sample(PISOT_BASES, rng.randint(1, 2))
    terms = []
    for beta in betas:
        c0, c1 = gen.rand_q(rng), gen.rand_q(rng, nonzero=False)
        B = f"({c1})*T + ({c0})" if rng.random() < 0.5 else f"{c0}"
        terms.append(f"({B} ; {beta})")
    a = " ".join(terms)
    roots = rng.sample(range(1, 6), rng.randint(0, 2))
    R = " * ".join(f"(T + {r})^{rng.randint(1, d - 1)}" for r in roots) or "1"
    R = f"({gen.rand_q(rng)}) * {R}"
    return {"a": a, "R": R, "d": d}


def _pisot_input(inst) -> ExpPoly:
    a = ExpPoly.parse(inst["a"])
    b = ExpPoly([(MvPoly.parse(inst["R"], 1, ["T"]), ONE)])
    for _ in range(inst["d"]):
        b = exp_mul(b, a)
    return b


def _ver_pisot(inst, prm, iid):
    b = _pisot_input(inst)
    d = inst["d"]
    try:
        fac = pisot_factor(b, d)
    except (HypothesisError, InsufficientWitnesses) as exc:
        return Verdict(iid, None, None, "precondition-unmet", "FINDING", inst, {}, {"error": str(exc)})
    R = MvPoly.parse(inst["R"], 1, ["T"])
    ratios = set()
    for m in range(prm["check"] + 1 + R.total_degree()):
        x = RationalFunction.constant(m)
        rv, fv = R.evaluate([x]), fac.R_value(m)
        ratios.add(str(fv / rv) if not rv.is_zero() else ("0" if fv.is_zero() else "bad"))
    R_ok = len(ratios) == 1 and next(iter(ratios)) != "bad" and K(next(iter(ratios))).is_constant() \
        and fac.R.total_degree() == R.total_degree()
    div_fail = [m for m in range(prm["check"] + 1) if not divisor_identity_holds(fac, b, m)]
    ok = R_ok and not div_fail
    details = fac.to_dict()
    details.update({"R_matches": R_ok, "divisor_failures": div_fail, "b": b.to_str()})
    return Verdict(iid, len(div_fail) + (0 if R_ok else 1), 0, "gcd-bound", "pass" if ok else "FINDING",
                   inst, {}, details)


suite("pisot", "round trip of constructed b(m) = R(m) a(m)^d", check=10)((_gen_pisot, _ver_pisot))


# runner --------------------------------------------------------------------------------
def instance_rng(name: str, seed: int, k: int) -> random.Random:
    return random.Random(f"{name}:{seed}:{k}")


def resolve_params(s: Suite, params: dict) -> dict:
    out = dict(s.defaults)
    for key, value in params.items():
        if key not in out:
            raise ValueError(f"suite {s.name!r} has no parameter {key!r}")
        default = out[key]
        out[key] = Fraction(value) if isinstance(default, Fraction) else type(default)(value)
    return out


def run_one(s: Suite, prm: dict, seed: int, k: int) -> Verdict:
    iid = f"{s.name}-{seed}-{k:05d}"
    inst = s.generate(instance_rng(s.name, seed, k), prm)
    try:
        v = s.verify(inst, prm, iid)
    except CapExceeded as exc:
        v = Verdict(iid, None, None, "cap-exceeded", "cap-exceeded", inst, {}, {"cap": str(exc)})
    # the generated instance is what the verifier consumes, so it is what the report keeps
    v.instance = inst
    return v


def summarize(verdicts: list[Verdict]) -> dict:
    counts = {st: 0 for st in STATUSES}
    for v in verdicts:
        counts[v.status] += 1
    return counts


def run_suite(spec: InstanceSpec) -> dict:
    """Generate and verify ``spec.count`` instances; the report is a plain dict."""
    if spec.suite not in SUITES:
        raise ValueError(f"unknown suite {spec.suite!r}; known: {', '.join(sorted(SUITES))}")
    if spec.count < 0:
        raise ValueError("count must be nonnegative")
    s = SUITES[spec.suite]
    prm = resolve_params(s, spec.params)
    verdicts = sorted((run_one(s, prm, spec.seed, k) for k in range(spec.count)), key=lambda v: v.instance_id)
    summary = summarize(verdicts)
    return {
        "suite": s.name,
        "seed": spec.seed,
        "count": spec.count,
        "params": {k: num(v) for k, v in sorted(prm.items())},
        "summary": summary,
        "finding": summary["FINDING"] > 0,
        "verdicts": [v.to_dict() for v in verdicts],
    }


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


CSV_FIELDS = ["id", "branch", "status", "lhs", "rhs", "margin"]


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for v in report["verdicts"]:
        w.writerow(["" if v[k] is None else v[k] for k in CSV_FIELDS])
    return buf.getvalue()


def write_report(report: dict, out: str, csv_path: str | None = None) -> None:
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(dumps(report))
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(report_csv(report))


__all__ = [
    "CSV_FIELDS",
    "InstanceSpec",
    "SUITES",
    "Suite",
    "dth_power_oracle",
    "dumps",
    "exhaustive_relation",
    "exp_mul",
    "report_csv",
    "resolve_params",
    "run_one",
    "run_suite",
    "summarize",
    "write_report",
]
