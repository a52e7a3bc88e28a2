"""Exponential polynomials over K and recovery of d-th root structure.

b(n) = sum_i B_i(n) beta_i^n.  After choosing a multiplicative basis u of
the group generated by the beta_i, b(m) = f(m, u^m) (u_1...u_n)^{-hdm} for
a polynomial f in K[x0, x1, ..., xn].  Splitting f into its x-content
Q(x0), a monomial and a d-th power G^d, and Q into beta Q0 Q1^d, gives
b(m) = Q0(m) a(m)^d with a(m) = gamma1 gamma2^m Q1(m) G(m, u^m), where the
gammas are formal radicals of explicit elements of K.  All checks stay in
K: they compare b(m) with Q0(m) beta (gamma2^d)^m A(m)^d exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .divlattice import UnitTuple, exponent_vector, integer_left_kernel, integer_row_echelon, refine_coprime_basis
from .ffcore import ONE, ZERO, FieldError, RationalFunction, divisor, is_dth_power
from .mvpoly import MvPoly, exact_div, is_coprime, mv_gcd, dth_power_free_decompose, squarefree_decomposition
from .parsing import ParseError, parse_polynomial

#: witnesses needed: M > 4n max(g - 1, 0) + 11n - 3
DEFAULT_M_CAP = 200
DEFAULT_CHECK = 10


def buchi_threshold(n: int, genus: int = 0) -> int:
    return 4 * n * max(genus - 1, 0) + 11 * n - 3


class HypothesisError(FieldError):
    """A hypothesis of the d-th root factorization fails for this input."""


def _var_names(n: int) -> list[str]:
    return ["x0"] + [f"x{j}" for j in range(1, n + 1)]


class ExpPoly:
    """n -> sum_i B_i(n) beta_i^n with B_i in K[T] and distinct beta_i."""

    def __init__(self, terms: Sequence[tuple]):
        merged: dict = {}
        order = []
        for B, beta in terms:
            beta = RationalFunction.coerce(beta)
            if beta.is_zero():
                raise FieldError("exponential bases must be nonzero")
            if not isinstance(B, MvPoly):
                B = MvPoly.constant(RationalFunction.coerce(B), 1)
            if B.nvars != 1:
                raise ValueError("coefficients must be polynomials in one variable T")
            key = str(beta)
            if key in merged:
                merged[key] = (merged[key][0] + B, beta)
            else:
                merged[key] = (B, beta)
                order.append(key)
        self.terms = [merged[k] for k in order if not merged[k][0].is_zero()]

    @classmethod
    def parse(cls, text: str) -> "ExpPoly":
        """Parse ``(B_1 ; beta_1) (B_2 ; beta_2) ...``; separators may be commas or '+'."""
        pairs = []
        depth = 0
        start = None
        for k, ch in enumerate(text):
            if ch == "(":
                if depth == 0:
                    start = k + 1
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth < 0:
                    raise ParseError("unbalanced parentheses")
                if depth == 0:
                    pairs.append(text[start:k])
            elif depth == 0 and not (ch.isspace() or ch in ",+"):
                raise ParseError(f"unexpected {ch!r} outside a (B ; beta) pair")
        if depth:
            raise ParseError("unbalanced parentheses")
        terms = []
        for body in pairs:
            if body.count(";") != 1:
                raise ParseError(f"expected 'B ; beta' in ({body})")
            left, right = body.split(";")
            B = parse_polynomial(left.strip(), nvars=1, names=["T"])
            beta = RationalFunction.parse(right.strip())
            terms.append((B, beta))
        return cls(terms)

    def eval(self, n: int) -> RationalFunction:
        out = ZERO
        for B, beta in self.terms:
            out = out + B.evaluate([RationalFunction.constant(n)]) * beta**n
        return out

    __call__ = eval

    def scale(self, c) -> "ExpPoly":
        return ExpPoly([(B.scale(c), beta) for B, beta in self.terms])

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(self.terms + other.terms)

    @property
    def betas(self) -> list[RationalFunction]:
        return [beta for _, beta in self.terms]

    def to_str(self) -> str:
        return " ".join(f"({B.to_str(['T'])} ; {beta})" for B, beta in self.terms)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"ExpPoly('{self}')"


@dataclass(frozen=True)
class GammaBasis:
    units: UnitTuple
    #: exponents[i][j]: beta_i = prod_j u_j^{exponents[i][j]}
    exponents: tuple

    @property
    def rank(self) -> int:
        return len(self.units)


def _power_product(xs: Sequence[RationalFunction], es: Sequence[int]) -> RationalFunction:
    out = ONE
    for x, e in zip(xs, es):
        if e:
            out = out * x**e
    return out


def gamma_basis(betas) -> GammaBasis:
    """A basis u of the group generated by the betas, with beta_i = u^{e_i}.

    Raises HypothesisError when a power product of the betas is a constant
    other than 1.
    """
    if isinstance(betas, ExpPoly):
        betas = betas.betas
    betas = [RationalFunction.coerce(b) for b in betas]
    if not betas:
        return GammaBasis(UnitTuple([]), ())
    basis = refine_coprime_basis(betas)
    E = [list(exponent_vector(b, basis).vector) for b in betas]
    for m in integer_left_kernel(E):
        w = _power_product(betas, m)
        if w != ONE:
            raise HypothesisError(
                f"the group meets the constants: prod beta^{tuple(m)} = {w} != 1"
            )
    H, U, rank = integer_row_echelon(E)
    units = [_power_product(betas, U[j]) for j in range(rank)]
    # solve E = X H over Z via the echelon pivots
    pivots = []
    for j in range(rank):
        pivots.append(next(c for c, x in enumerate(H[j]) if x))
    exps = []
    for row in E:
        rest = list(row)
        coeffs = []
        for j in range(rank):
            c = pivots[j]
            if rest[c] % H[j][c]:
                raise AssertionError("row lattice basis does not generate the betas")
            q = rest[c] // H[j][c]
            coeffs.append(q)
            rest = [x - q * y for x, y in zip(rest, H[j])]
        if any(rest):
            raise AssertionError("row lattice basis does not generate the betas")
        exps.append(tuple(coeffs))
    for b, e in zip(betas, exps):
        if _power_product(units, e) != b:
            raise AssertionError(f"{b} is not reproduced by its basis expression")
    return GammaBasis(UnitTuple(units), tuple(exps))


@dataclass
class LaurentModel:
    f: MvPoly
    basis: GammaBasis
    h: int
    d: int

    @property
    def n(self) -> int:
        return self.basis.rank

    def twist(self) -> RationalFunction:
        """(u_1 ... u_n)^{-hd}; b(m) = f(m, u^m) * twist^m."""
        return _power_product(self.basis.units.entries, [-self.h * self.d] * self.n)

    def value(self, m: int) -> RationalFunction:
        us = [u**m for u in self.basis.units.entries]
        return self.f.evaluate([RationalFunction.constant(m)] + us) * self.twist() ** m

    def to_str(self) -> str:
        return self.f.to_str(_var_names(self.n))


def laurent_model(b: ExpPoly, d: int = 1, n_check: int = DEFAULT_CHECK) -> LaurentModel:
    """f with b(m) = f(m, u^m) (u_1...u_n)^{-hdm}, h minimal."""
    if d < 1:
        raise ValueError("d must be positive")
    gb = gamma_basis(b)
    n = gb.rank
    low = 0
    for e in gb.exponents:
        if e:
            low = min(low, min(e))
    h = -((low) // d) if low < 0 else 0
    shift = h * d
    terms: dict = {}
    for (B, _), e in zip(b.terms, gb.exponents):
        x = tuple(k + shift for k in e)
        for (k,), c in B.terms.items():
            mono = (k,) + x
            terms[mono] = terms[mono] + c if mono in terms else c
    f = MvPoly(terms, n + 1)
    model = LaurentModel(f, gb, h, d)
    for m in range(n_check + 1):
        if model.value(m) != b.eval(m):
            raise AssertionError(f"Laurent model does not reproduce b({m})")
    return model


def dth_power_density(b: ExpPoly, d: int, m_range: range | Sequence[int]) -> list[int]:
    """The m in m_range with b(m) a d-th power in K (0 = 0^d counts)."""
    if d < 2:
        raise ValueError("d must be at least 2")
    out = []
    for m in m_range:
        v = b.eval(m)
        if v.is_zero() or is_dth_power(v, d):
            out.append(m)
    return out


@dataclass
class GuardReport:
    samples: list
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def coprime_specialization_guard(Pi: MvPoly, Pj: MvPoly, m_samples: Sequence[int]) -> GuardReport:
    """Check P_i(m, x) and P_j(m, x) stay coprime in K[x] at sampled m."""
    if Pi.nvars != Pj.nvars:
        raise ValueError("arity mismatch")
    if Pi == Pj or Pi.monic() == Pj.monic():
        raise ValueError("identical factors")
    if not is_coprime(Pi, Pj):
        raise ValueError("the polynomials are not coprime")
    failures = []
    for m in m_samples:
        a = Pi.substitute(0, m)
        c = Pj.substitute(0, m)
        if a.is_zero() or c.is_zero() or not is_coprime(a, c):
            failures.append(m)
    return GuardReport(list(m_samples), failures)


def _x_content(f: MvPoly) -> MvPoly:
    """gcd over K[x0] of the coefficients of f as a polynomial in x."""
    groups: dict = {}
    for i, c in f.terms.items():
        groups.setdefault(i[1:], {})[(i[0],) + (0,) * (f.nvars - 1)] = c
    g = None
    for key in sorted(groups):
        P = MvPoly(groups[key], f.nvars)
        g = P if g is None else mv_gcd(g, P)
        if g.is_constant():
            return MvPoly.one(f.nvars)
    return g.monic()


def _univariate(P: MvPoly, var: str = "T") -> str:
    """P in K[x0] printed in the variable T."""
    Q = MvPoly({(i[0],): c for i, c in P.terms.items()}, 1)
    return Q.to_str([var])


@dataclass
class PisotFactorization:
    R: MvPoly
    Q1: MvPoly
    G: MvPoly
    beta: RationalFunction
    #: gamma1^d = beta, gamma2^d = gamma2_power
    gamma2_power: RationalFunction
    monomial: tuple
    d: int
    model: LaurentModel
    witnesses: list
    threshold: int
    R_in_k: bool
    notes: list = field(default_factory=list)

    def a_core(self, m: int) -> RationalFunction:
        """A(m) = Q1(m) G(m, u^m); a(m) = gamma1 gamma2^m A(m)."""
        us = [u**m for u in self.model.basis.units.entries]
        x = [RationalFunction.constant(m)] + us
        return self.Q1.evaluate(x) * self.G.evaluate(x)

    def R_value(self, m: int) -> RationalFunction:
        return self.R.evaluate([RationalFunction.constant(m)] + [ONE] * self.model.n)

    def reconstruct(self, m: int) -> RationalFunction:
        """R(m) * a(m)^d with the formal radicals raised to the d-th power."""
        return self.R_value(m) * self.beta * self.gamma2_power**m * self.a_core(m) ** self.d

    def a_divisor(self, m: int) -> dict:
        """div(a(m)) with rational multiplicities (the radicals contribute 1/d)."""
        out: dict = {}
        for f, w in ((self.beta, Fraction(1, self.d)), (self.gamma2_power, Fraction(m, self.d))):
            if m == 0 and f is self.gamma2_power:
                continue
            for p, v in divisor(f).items():
                out[p] = out.get(p, 0) + w * v
        A = self.a_core(m)
        for p, v in divisor(A).items():
            out[p] = out.get(p, 0) + v
        return {p: v for p, v in out.items() if v}

    def to_dict(self) -> dict:
        names = _var_names(self.model.n)
        return {
            "R": _univariate(self.R),
            "R_in_k": self.R_in_k,
            "Q1": _univariate(self.Q1),
            "G": self.G.to_str(names),
            "beta": str(self.beta),
            "gamma1_power": str(self.beta),
            "gamma2_power": str(self.gamma2_power),
            "monomial": list(self.monomial),
            "d": self.d,
            "f": self.model.to_str(),
            "h": self.model.h,
            "basis": [str(u) for u in self.model.basis.units.entries],
            "exponents": [list(e) for e in self.model.basis.exponents],
            "witness_count": len(self.witnesses),
            "threshold": self.threshold,
            "notes": list(self.notes),
        }


class InsufficientWitnesses(FieldError):
    pass


def pisot_factor(
    b: ExpPoly,
    d: int,
    M_cap: int = DEFAULT_M_CAP,
    n_check: int = DEFAULT_CHECK,
    genus: int = 0,
    guard_samples: Sequence[int] = tuple(range(0, 11)),
) -> PisotFactorization:
    """Recover b(m) = R(m) a(m)^d from enough d-th power values."""
    if d < 2:
        raise ValueError("d must be at least 2")
    model = laurent_model(b, d, n_check)
    f = model.f
    if f.is_zero():
        raise FieldError("b is identically zero")
    n = model.n
    N = n + 1
    Q = _x_content(f)
    P = exact_div(f, Q)
    dec = dth_power_free_decompose(P, d)
    notes = []
    if not dec.is_trivial_form:
        _, parts = squarefree_decomposition(dec.P)
        bad = [S for S, k in parts]
        for a_idx in range(len(bad)):
            for b_idx in range(a_idx + 1, len(bad)):
                rep = coprime_specialization_guard(bad[a_idx], bad[b_idx], guard_samples)
                if rep.failures:
                    notes.append(f"specialization collision at m in {rep.failures}")
        raise HypothesisError("hypothesis pattern violated: non-d-th-power factor survives "
                              f"({dec.P.to_str(_var_names(n))})")
    # Q = Q0 Q1^d with Q0 d-th power free, both monic
    Q0 = MvPoly.one(N)
    Q1 = MvPoly.one(N)
    if not Q.is_constant():
        _, parts = squarefree_decomposition(Q)
        for S, k in parts:
            if k % d:
                Q0 = Q0 * S ** (k % d)
            if k // d:
                Q1 = Q1 * S ** (k // d)
    beta = dec.a
    units = model.basis.units.entries
    gamma2_power = _power_product(units, [e - model.h * d for e in dec.monomial[1:]])
    R_in_k = all(c.is_constant() for c in Q0.terms.values())
    deg_Q0 = max((i[0] for i in Q0.terms), default=0)
    threshold = buchi_threshold(max(2, deg_Q0), genus)
    witnesses = []
    for m in range(M_cap + 1):
        v = b.eval(m)
        if not v.is_zero() and is_dth_power(v, d):
            witnesses.append(m)
            if len(witnesses) > threshold:
                break
    fac = PisotFactorization(Q0, Q1, dec.G, beta, gamma2_power, dec.monomial[1:], d, model,
                             witnesses, threshold, R_in_k, notes)
    for m in range(n_check + 1):
        if fac.reconstruct(m) != b.eval(m):
            raise AssertionError(f"round trip fails at m = {m}")
    if len(witnesses) <= threshold:
        raise InsufficientWitnesses(
            f"insufficient d-th-power witnesses: {len(witnesses)} in 0..{M_cap}, need more than {threshold}"
        )
    if not R_in_k:
        fac.notes.append("counterexample candidate: R has nonconstant coefficients")
    return fac


def divisor_identity_holds(fac: PisotFactorization, b: ExpPoly, m: int) -> bool:
    """div(b(m)) = d div(a(m)) + div(R(m)), with R(m) in k contributing nothing."""
    v = b.eval(m)
    R = fac.R_value(m)
    if v.is_zero() or R.is_zero() or fac.a_core(m).is_zero():
        return True
    lhs = {p: Fraction(e) for p, e in divisor(v).items()}
    rhs: dict = {}
    for p, e in fac.a_divisor(m).items():
        rhs[p] = rhs.get(p, 0) + fac.d * e
    for p, e in divisor(R).items():
        rhs[p] = rhs.get(p, 0) + e
    rhs = {p: e for p, e in rhs.items() if e}
    return lhs == rhs


__all__ = [
    "DEFAULT_M_CAP",
    "ExpPoly",
    "GammaBasis",
    "GuardReport",
    "HypothesisError",
    "InsufficientWitnesses",
    "LaurentModel",
    "PisotFactorization",
    "buchi_threshold",
    "coprime_specialization_guard",
    "divisor_identity_holds",
    "dth_power_density",
    "gamma_basis",
    "laurent_model",
    "pisot_factor",
]
