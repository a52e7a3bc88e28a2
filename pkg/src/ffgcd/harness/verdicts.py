"""Per-instance verdicts for the gcd and height inequalities.

A verdict records both sides of one inequality exactly, the branch that
was taken, and a status.  Inequalities are only asserted when every
hypothesis has been verified on the instance; otherwise the verdict
carries the unmet hypothesis and no assertion is made.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from ..derivation import D_u, derivative_gcd_fact, derivative_gcd_check, log_derivative_height_check, log_derivative
from ..divlattice import UnitTuple, find_relation, min_relation_height
from ..ffcore import (
    ONE,
    ZERO,
    FieldError,
    PlaceSet,
    RationalFunction,
    counting,
    gcd_counting,
    height,
    is_dth_power,
    is_S_integer,
    is_S_unit,
    projective_height,
)
from ..mvpoly import (
    F_e_u,
    FactoredForm,
    MvPoly,
    coprime_criterion_irreducible,
    is_coprime,
    mv_height,
    relevant_height,
)
from ..refinement import choose_m

#: values of Verdict.branch
BRANCHES = ("gcd-bound", "relation", "below-threshold", "precondition-unmet", "cap-exceeded")
#: values of Verdict.status, in summary order
STATUSES = ("pass", "relation", "below-threshold", "precondition-unmet", "cap-exceeded", "FINDING")


def num(x):
    """Exact number for JSON: int when integral, 'p/q' otherwise."""
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def parse_num(x) -> Fraction | None:
    if x is None:
        return None
    return Fraction(x)


def kappa(S: PlaceSet, genus: int = 0) -> int:
    """max{0, 2g - 2 + |S|}."""
    return max(0, 2 * genus - 2 + S.size)


@dataclass
class Verdict:
    instance_id: str
    lhs: Fraction | int | None
    rhs: Fraction | int | None
    branch: str
    status: str
    instance: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"unknown branch {self.branch!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def margin(self) -> Fraction | None:
        if self.lhs is None or self.rhs is None:
            return None
        return Fraction(self.rhs) - Fraction(self.lhs)

    @property
    def finding(self) -> bool:
        return self.status == "FINDING"

    def to_dict(self) -> dict:
        return {
            "id": self.instance_id,
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "margin": num(self.margin),
            "branch": self.branch,
            "status": self.status,
            "instance": self.instance,
            "witness": self.witness,
            "details": _jsonable(self.details),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return num(x)
    if isinstance(x, RationalFunction):
        return str(x)
    if isinstance(x, MvPoly):
        return x.to_str()
    if isinstance(x, PlaceSet):
        return str(x)
    return x


def _bound_verdict(iid, lhs, rhs, instance, witness=None, details=None, branch="gcd-bound") -> Verdict:
    ok = Fraction(rhs) - Fraction(lhs) >= 0
    return Verdict(iid, lhs, rhs, branch, "pass" if ok else "FINDING", instance, witness or {}, details or {})


def _unmet(iid, why: str, instance, lhs=None, rhs=None, details=None) -> Verdict:
    d = dict(details or {})
    d["unmet"] = why
    return Verdict(iid, lhs, rhs, "precondition-unmet", "precondition-unmet", instance, {}, d)


def _strs(fs) -> list[str]:
    return [str(f) for f in fs]


# exact identities ---------------------------------------------------------------
def verify_identities(F: MvPoly, G: MvPoly, u, iid: str = "") -> Verdict:
    """Gauss lemma, the D_u value identity and the D_u product rule."""
    us = [RationalFunction.coerce(x) for x in u]
    inst = {"F": F.to_str(), "G": G.to_str(), "u": _strs(us)}
    FG = F * G
    lhs = mv_height(FG)
    rhs = mv_height(F) + mv_height(G)
    value_ok = F.evaluate(us).derivative() == D_u(F, us).evaluate(us)
    product_ok = D_u(FG, us) == D_u(F, us) * G + F * D_u(G, us)
    details = {"gauss": lhs == rhs, "value_identity": value_ok, "product_rule": product_ok}
    ok = lhs == rhs and value_ok and product_ok
    return Verdict(iid, lhs, rhs, "gcd-bound", "pass" if ok else "FINDING", inst, {}, details)


def verify_divisor_degree(f, iid: str = "") -> Verdict:
    """sum_p v_p(f) deg p = 0, with the finite part checked against deg num - deg den."""
    from ..ffcore import divisor

    f = RationalFunction.coerce(f)
    div = divisor(f)
    total = sum(v * p.degree for p, v in div.items())
    finite = sum(v * p.degree for p, v in div.items() if not p.is_infinite)
    ok = total == 0 and finite == f.deg_num - f.deg_den
    return Verdict(iid, total, 0, "gcd-bound", "pass" if ok else "FINDING", {"f": str(f)}, {},
                   {"places": len(div), "finite_degree": finite})


# unit equations --------------------------------------------------------------------
def vanishing_subsums(terms: Sequence[RationalFunction]) -> list[tuple]:
    """Index sets of nonempty proper subsums equal to 0 (exhaustive)."""
    n = len(terms)
    out = []
    for k in range(1, n):
        for idx in itertools.combinations(range(n), k):
            s = ZERO
            for i in idx:
                s = s + terms[i]
            if s.is_zero():
                out.append(idx)
    return out


def verify_brownawell_masser(fs: Sequence, S: PlaceSet, genus: int = 0, iid: str = "") -> Verdict:
    """Unit equation f_1 + ... + f_n = 1: max h(f_i) <= n(n-1)/2 max{0, 2g-2+|S|}."""
    fs = [RationalFunction.coerce(f) for f in fs]
    inst = {"f": _strs(fs), "S": str(S), "genus": genus}
    total = ZERO
    for f in fs:
        total = total + f
    if total != ONE:
        raise ValueError("the terms do not sum to 1")
    if len(fs) > 6:
        raise ValueError("subsum search is limited to n <= 6")
    bad = [str(f) for f in fs if f.is_zero() or not is_S_unit(f, S)]
    n = len(fs)
    rhs = Fraction(n * (n - 1), 2) * kappa(S, genus)
    lhs = max(height(f) for f in fs if not f.is_zero()) if any(not f.is_zero() for f in fs) else 0
    if bad:
        return _unmet(iid, f"not S-units: {bad}", inst, lhs, rhs)
    sub = vanishing_subsums(fs + [RationalFunction.constant(-1)])
    proper = [s for s in sub if n not in s]
    # a subsum of f_1 + ... + f_n - 1 = 0 that includes -1 is the complement of one that does not
    if proper:
        return Verdict(iid, lhs, rhs, "relation", "relation", inst,
                       {"vanishing_subsum": list(proper[0])}, {"n": n})
    return _bound_verdict(iid, lhs, rhs, inst, details={"n": n, "S_size": S.size})


def green_threshold(n: int, h_a: int, genus: int = 0) -> int:
    return (n - 1) ** 2 * (n - 2) * max(1, genus) + (n - 1) ** 4 * h_a


def verify_green(a: Sequence, f: Sequence, ell: int, genus: int = 0, iid: str = "") -> Verdict:
    """sum a_i f_i^ell = 0 with ell above the threshold forces constant ratios."""
    a = [RationalFunction.coerce(x) for x in a]
    f = [RationalFunction.coerce(x) for x in f]
    inst = {"a": _strs(a), "f": _strs(f), "ell": ell, "genus": genus}
    if len(a) != len(f) or len(a) < 2:
        raise ValueError("need matching lists of length >= 2")
    if any(x.is_zero() for x in a + f):
        raise ValueError("coefficients and functions must be nonzero")
    terms = [ai * fi**ell for ai, fi in zip(a, f)]
    total = ZERO
    for x in terms:
        total = total + x
    if not total.is_zero():
        raise ValueError("the weighted power sum does not vanish")
    n = len(a)
    sub = vanishing_subsums(terms)
    ratio_h = max(height(fi / fj) for fi, fj in itertools.combinations(f, 2))
    h_a = projective_height(a)
    threshold = green_threshold(n, h_a, genus)
    details = {"threshold": threshold, "h_a": h_a, "n": n, "max_ratio_height": ratio_h}
    if sub:
        return Verdict(iid, ratio_h, 0, "relation", "relation", inst, {"vanishing_subsum": list(sub[0])}, details)
    if ell > threshold:
        return _bound_verdict(iid, ratio_h, 0, inst, details=details)
    return Verdict(iid, ratio_h, 0, "below-threshold", "below-threshold", inst, {}, details)


# derivatives -------------------------------------------------------------------------
def verify_derivative_gcd(eta, S: PlaceSet, genus: int = 0, iid: str = "") -> Verdict:
    """N_{S,gcd}(eta, eta') >= N_S(eta) - Nbar_S(eta) - 3g, as rhs - lhs >= 0 with sides swapped."""
    eta = RationalFunction.coerce(eta)
    inst = {"eta": str(eta), "S": str(S), "genus": genus}
    rep = derivative_gcd_check(eta, S, genus)
    # lower bound: report lhs = claimed lower bound, rhs = the gcd count
    return _bound_verdict(iid, rep.rhs, rep.lhs, inst, details=rep.details)


def verify_log_derivative_height(etas: Sequence, S: PlaceSet, genus: int = 0, iid: str = "") -> Verdict:
    etas = [RationalFunction.coerce(e) for e in etas]
    inst = {"eta": _strs(etas), "S": str(S), "genus": genus}
    rep = log_derivative_height_check(etas, S, genus)
    return _bound_verdict(iid, rep.lhs, rep.rhs, inst, details=rep.details)


def verify_du_height(F: MvPoly, u, S: PlaceSet, genus: int = 0, iid: str = "") -> Verdict:
    """h~(D_u F) <= |S| + (2|I_F| + 1) h~(F) + 3g, with the intermediate bound checked too."""
    us = [RationalFunction.coerce(x) for x in getattr(u, "entries", u)]
    inst = {"F": F.to_str(), "u": _strs(us), "S": str(S), "genus": genus}
    if F.is_constant():
        raise ValueError("F must be nonconstant")
    bad = [str(x) for x in us if not is_S_unit(x, S)]
    if bad:
        return _unmet(iid, f"not S-units: {bad}", inst)
    DF = D_u(F, us)
    lhs = relevant_height(DF) if not DF.is_zero() else 0
    size = len(F.terms)
    hF = relevant_height(F)
    rhs = S.size + (2 * size + 1) * hF + 3 * genus
    coeffs = list(F.terms.values())
    logs = []
    for i, a in F.terms.items():
        w = a
        for x, e in zip(us, i):
            if e:
                w = w * x**e
        logs.append(log_derivative(w))
    middle = projective_height([ONE] + coeffs) + projective_height([ONE] + logs)
    details = {"intermediate": middle, "I_F": size, "h_tilde_F": hF,
               "intermediate_ok": lhs <= middle <= rhs}
    v = _bound_verdict(iid, lhs, rhs, inst, details=details)
    if not details["intermediate_ok"]:
        v.status = "FINDING"
    return v


# d-th powers -------------------------------------------------------------------------
def verify_dth_power_count(factors: FactoredForm, u, S: PlaceSet, d: int, eps, genus: int = 0,
                   iid: str = "") -> Verdict:
    """F(u) = g^d: either N_S(F(u)) <= eps max h(u_j) or a short power product of u has small height.

    The constants in the second alternative are existential, so it is
    recorded (relation branch) rather than asserted.  Explicit facts used
    along the way are asserted: the derivative gcd lower bound, the
    factorization of D_u(F)(u), and the height bound for non-coprime
    F_bar, F_{e,u}.
    """
    eps = Fraction(eps)
    us = [RationalFunction.coerce(x) for x in getattr(u, "entries", u)]
    F = factors.expand()
    inst = {"factors": [[P.to_str(), e] for P, e in factors.factors], "constant": str(factors.constant),
            "monomial": list(factors.monomial), "u": _strs(us), "S": str(S), "d": d, "eps": num(eps),
            "genus": genus}
    if any(e >= d for _, e in factors.factors):
        return _unmet(iid, "a multiplicity is not below d", inst)
    if any(P.is_monomial() for P, _ in factors.factors) or any(factors.monomial):
        return _unmet(iid, "monomial factor", inst)
    if not factors.constant.is_constant():
        return _unmet(iid, "leading constant is not in k", inst)
    bad = [str(x) for x in us if not is_S_unit(x, S)]
    if bad:
        return _unmet(iid, f"not S-units: {bad}", inst)
    if not all(is_S_integer(c, S) for P, _ in factors.factors for c in P.terms.values()):
        return _unmet(iid, "factor coefficients are not S-integers", inst)
    Fu = F.evaluate(us)
    if Fu.is_zero():
        return _unmet(iid, "F(u) = 0", inst)
    if not is_dth_power(Fu, d):
        raise ValueError("F(u) is not a d-th power")
    maxh = max(height(x) for x in us)
    NS = counting(Fu, S, "N")
    lhs, rhs = NS, eps * maxh
    details: dict = {"N_S": NS, "max_h": maxh, "deg_F": F.total_degree(), "h_tilde_F": relevant_height(F)}
    findings = []
    # D_u(F)(u) = prod F_i(u)^{e_i - 1} * F_{e,u}(u)
    Feu = F_e_u(factors, us)
    DFu = D_u(F, us).evaluate(us)
    prod = factors.constant
    for P, e in factors.factors:
        if e > 1:
            prod = prod * P.evaluate(us) ** (e - 1)
    prod = prod * Feu.evaluate(us)
    if DFu != Fu.derivative() or DFu != prod:
        findings.append("derivative factorization")
    # explicit lower bound on the derivative gcd
    if not Fu.is_constant():
        gl = gcd_counting(Fu, DFu, S, "N") if not DFu.is_zero() else None
        low = Fraction(d - 1, d) * NS - 3 * genus
        details["gcd_derivative"] = gl
        details["gcd_derivative_lower"] = low
        if gl is not None and gl < low:
            findings.append("derivative gcd lower bound")
    # F_bar versus F_{e,u}
    Fbar = factors.radical()
    coprime = Feu.is_zero() is False and is_coprime(Fbar, Feu)
    details["Fbar_Feu_coprime"] = coprime
    witness: dict = {}
    if not coprime:
        for P, _ in factors.factors:
            crit = coprime_criterion_irreducible(P, us)
            if not crit.coprime and crit.witnesses:
                i, j, _ratio = crit.witnesses[0]
                m = tuple(a - b for a, b in zip(i, j))
                hm = height(UnitTuple(us).power_product(m))
                witness = {"exponents": list(m), "height": hm, "bound": mv_height(P)}
                if hm > mv_height(P) or sum(abs(x) for x in m) > 2 * F.total_degree():
                    findings.append("non-coprime height bound")
                break
    rel = find_relation(UnitTuple(us), 2 * F.total_degree())
    if rel is not None:
        details["relation"] = list(rel.exponents)
    mh = min_relation_height(UnitTuple(us), 2 * F.total_degree())
    if mh is not None:
        details["min_relation_height"] = mh[0]
        details["min_relation_exponents"] = list(mh[1])
    if findings:
        details["findings"] = findings
        return Verdict(iid, lhs, rhs, "gcd-bound", "FINDING", inst, witness, details)
    if NS <= rhs:
        return Verdict(iid, lhs, rhs, "gcd-bound", "pass", inst, witness, details)
    if witness or rel is not None:
        if not witness:
            witness = {"exponents": list(rel.exponents), "height": 0}
        return Verdict(iid, lhs, rhs, "relation", "relation", inst, witness, details)
    return Verdict(iid, lhs, rhs, "below-threshold", "below-threshold", inst, witness, details)


# gcd of polynomials at unit values -------------------------------------------------------------------------
def _gcd_data(F: MvPoly, G: MvPoly, gs: Sequence[RationalFunction], S: PlaceSet) -> dict | None:
    Fg, Gg = F.evaluate(list(gs)), G.evaluate(list(gs))
    if Fg.is_zero() or Gg.is_zero():
        return None
    return {
        "N_gcd": gcd_counting(Fg, Gg, S, "N"),
        "h_gcd": gcd_counting(Fg, Gg, None, "h"),
        "max_h": max(height(x) for x in gs),
    }


def _check_pair(F: MvPoly, G: MvPoly):
    if F.nvars != G.nvars:
        raise ValueError("F and G must have the same variables")
    if F.is_constant() or G.is_constant():
        raise ValueError("F and G must be nonconstant")
    if not is_coprime(F, G):
        raise ValueError("F and G are not coprime")


def _trichotomy(iid, F, G, gs, S, eps, relation_l1, inst, extra=None) -> Verdict:
    data = _gcd_data(F, G, gs, S)
    if data is None:
        return _unmet(iid, "F(g) or G(g) vanishes", inst)
    details = dict(extra or {})
    details.update(data)
    maxh = data["max_h"]
    rhs = eps * maxh
    a_holds = data["N_gcd"] <= rhs
    both_vanish = F.constant_coeff().is_zero() and G.constant_coeff().is_zero()
    b_applies = not both_vanish
    b_holds = data["h_gcd"] <= rhs if b_applies else None
    details.update({"a": a_holds, "b": b_holds, "b_applies": b_applies, "relation_l1": relation_l1})
    rel = find_relation(UnitTuple(gs), relation_l1)
    witness = {}
    if rel is not None:
        witness = {"exponents": list(rel.exponents), "constant": num(rel.witness)}
    if a_holds and (b_holds or not b_applies):
        return Verdict(iid, data["N_gcd"], rhs, "gcd-bound", "pass", inst, witness, details)
    if rel is not None:
        return Verdict(iid, data["N_gcd"], rhs, "relation", "relation", inst, witness, details)
    return Verdict(iid, data["N_gcd"], rhs, "below-threshold", "below-threshold", inst, witness, details)


def _pair_degree(F: MvPoly, G: MvPoly) -> int:
    return max(F.total_degree(), G.total_degree())


def verify_gcd_unit_values(F: MvPoly, G: MvPoly, g, S: PlaceSet, eps, genus: int = 0, iid: str = "",
                 max_n: int = 3, max_m: int = 8) -> Verdict:
    """Either a short multiplicative relation, or N_gcd and h_gcd are at most eps max h(g_i)."""
    eps = Fraction(eps)
    gs = [RationalFunction.coerce(x) for x in getattr(g, "entries", g)]
    inst = {"F": F.to_str(), "G": G.to_str(), "g": _strs(gs), "S": str(S), "eps": num(eps), "genus": genus}
    _check_pair(F, G)
    n = F.nvars
    if n > max_n:
        return Verdict(iid, None, None, "cap-exceeded", "cap-exceeded", inst, {}, {"cap": f"n = {n} > {max_n}"})
    m = choose_m(n, _pair_degree(F, G), eps)
    if m > max_m:
        return Verdict(iid, None, None, "cap-exceeded", "cap-exceeded", inst, {}, {"cap": f"m = {m} > {max_m}"})
    bad = [str(x) for x in gs if not is_S_unit(x, S)]
    if bad:
        return _unmet(iid, f"not S-units: {bad}", inst)
    return _trichotomy(iid, F, G, gs, S, eps, 2 * m, inst, {"m": m})


def two_unit_height_constant(m: int) -> int:
    b = comb(m + 2, 2)
    return 2 * m * (b - 1) * (b - 2)


def verify_gcd_two_units(F: MvPoly, G: MvPoly, g, S: PlaceSet, eps, genus: int = 0, iid: str = "") -> Verdict:
    """Constant coefficients, two units: above the explicit height threshold the trichotomy is asserted."""
    eps = Fraction(eps)
    gs = [RationalFunction.coerce(x) for x in getattr(g, "entries", g)]
    inst = {"F": F.to_str(), "G": G.to_str(), "g": _strs(gs), "S": str(S), "eps": num(eps), "genus": genus}
    _check_pair(F, G)
    if F.nvars != 2 or len(gs) != 2:
        raise ValueError("two variables and two units are required")
    if not all(c.is_constant() for P in (F, G) for c in P.terms.values()):
        raise ValueError("coefficients must be constants")
    bad = [str(x) for x in gs if not is_S_unit(x, S)]
    if bad:
        return _unmet(iid, f"not S-units: {bad}", inst)
    m = choose_m(2, _pair_degree(F, G), eps)
    c = two_unit_height_constant(m)
    threshold = c * max(1, 2 * genus - 2 + S.size)
    maxh = max(height(x) for x in gs)
    extra = {"m": m, "c": c, "threshold": threshold}
    if maxh < threshold:
        data = _gcd_data(F, G, gs, S) or {}
        extra.update(data)
        return Verdict(iid, data.get("N_gcd"), eps * maxh, "below-threshold", "below-threshold", inst, {}, extra)
    v = _trichotomy(iid, F, G, gs, S, eps, 2 * m, inst, extra)
    if v.status == "below-threshold":
        # every hypothesis holds and no relation exists: the statement is violated
        v.status = "FINDING"
        v.branch = "gcd-bound"
    return v


def verify_gcd_powers(F: MvPoly, G: MvPoly, g, ell: int, eps, genus: int = 0, iid: str = "",
                 relation_l1: int | None = None, max_l1: int = 400) -> Verdict:
    """The trichotomy for (g_1^ell, ..., g_n^ell) with S the support of g."""
    eps = Fraction(eps)
    gs = [RationalFunction.coerce(x) for x in getattr(g, "entries", g)]
    if all(x.is_constant() for x in gs):
        raise ValueError("not all g_i may be constant")
    S = PlaceSet.support(*gs)
    inst = {"F": F.to_str(), "G": G.to_str(), "g": _strs(gs), "ell": ell, "eps": num(eps), "genus": genus}
    _check_pair(F, G)
    if relation_l1 is None:
        relation_l1 = 2 * choose_m(F.nvars, _pair_degree(F, G), eps)
    if relation_l1 > max_l1:
        return Verdict(iid, None, None, "cap-exceeded", "cap-exceeded", inst, {},
                       {"cap": f"relation bound {relation_l1} > {max_l1}"})
    powered = [x**ell for x in gs]
    v = _trichotomy(iid, F, G, powered, S, eps, relation_l1, inst, {"S": str(S)})
    if v.witness:
        # a relation among the g_i^ell is one among the g_i
        v.witness = dict(v.witness)
    return v


__all__ = [
    "BRANCHES",
    "STATUSES",
    "Verdict",
    "green_threshold",
    "kappa",
    "num",
    "two_unit_height_constant",
    "vanishing_subsums",
    "verify_brownawell_masser",
    "verify_divisor_degree",
    "verify_green",
    "verify_identities",
    "verify_derivative_gcd",
    "verify_log_derivative_height",
    "verify_dth_power_count",
    "verify_du_height",
    "verify_gcd_unit_values",
    "verify_gcd_two_units",
    "verify_gcd_powers",
]
