"""Multivariate polynomials over K = Q(t).

Sparse dict representation, graded-lex order with x1 > x2 > ... > xn.
"Monic" means the coefficient of the largest monomial is 1.  The gcd is a
recursive primitive PRS in the lowest-index variable present, with content
recursion on the remaining variables; squarefree structure is Yun's
algorithm in that same variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import flint

from .ffcore import (
    ONE,
    ZERO,
    ClosedPoint,
    FieldError,
    RationalFunction,
    places,
    projective_height,
    valuation,
)

Monomial = tuple


def grlex_key(i: Monomial):
    return (sum(i), i)


def _coerce_k(c) -> RationalFunction:
    return RationalFunction.coerce(c)


class MvPoly:
    """F = sum a_i x^i with coefficients in K; immutable."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, nvars: int = 1, *, _clean: bool = False):
        self.nvars = nvars
        if _clean:
            self.terms = terms
        else:
            clean = {}
            for mono, c in (terms or {}).items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != nvars:
                    raise ValueError(f"monomial {mono} does not have {nvars} exponents")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = _coerce_k(c)
                if not c.is_zero():
                    clean[mono] = c
            self.terms = clean
        self._hash = None

    # construction ----------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MvPoly":
        return cls({}, nvars, _clean=True)

    @classmethod
    def constant(cls, c, nvars: int) -> "MvPoly":
        c = _coerce_k(c)
        if c.is_zero():
            return cls.zero(nvars)
        return cls({(0,) * nvars: c}, nvars, _clean=True)

    @classmethod
    def one(cls, nvars: int) -> "MvPoly":
        return cls.constant(ONE, nvars)

    @classmethod
    def var(cls, j: int, nvars: int) -> "MvPoly":
        mono = tuple(1 if k == j else 0 for k in range(nvars))
        return cls({mono: ONE}, nvars, _clean=True)

    @classmethod
    def monomial(cls, mono: Monomial, coeff=ONE) -> "MvPoly":
        return cls({tuple(mono): coeff}, len(mono))

    @classmethod
    def parse(cls, text: str, nvars: int | None = None, names: list[str] | None = None) -> "MvPoly":
        from .parsing import parse_polynomial

        return parse_polynomial(text, nvars=nvars, names=names)

    def _new(self, terms) -> "MvPoly":
        return MvPoly(terms, self.nvars, _clean=True)

    def _lift(self, other) -> "MvPoly":
        if isinstance(other, MvPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        return MvPoly.constant(_coerce_k(other), self.nvars)

    # predicates and accessors ---------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and sum(next(iter(self.terms))) == 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_coeff(self) -> RationalFunction:
        return self.terms.get((0,) * self.nvars, ZERO)

    def coeff(self, mono: Monomial) -> RationalFunction:
        return self.terms.get(tuple(mono), ZERO)

    @property
    def support(self) -> list[Monomial]:
        """I_F in decreasing graded-lex order."""
        return sorted(self.terms, key=grlex_key, reverse=True)

    def coefficients(self) -> list[RationalFunction]:
        return [self.terms[i] for i in self.support]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(i) for i in self.terms)

    def degree_in(self, j: int) -> int:
        if not self.terms:
            return -1
        return max(i[j] for i in self.terms)

    def variables(self) -> list[int]:
        return [j for j in range(self.nvars) if any(i[j] for i in self.terms)]

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise FieldError("zero polynomial has no leading monomial")
        return max(self.terms, key=grlex_key)

    def leading_coeff(self) -> RationalFunction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "MvPoly":
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == ONE:
            return self
        inv = lc.inverse()
        return self._new({i: c * inv for i, c in self.terms.items()})

    def is_monic(self) -> bool:
        return bool(self.terms) and self.leading_coeff() == ONE

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for i, c in o.terms.items():
            s = terms.get(i)
            if s is None:
                terms[i] = c
            else:
                s = s + c
                if s.is_zero():
                    del terms[i]
                else:
                    terms[i] = s
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "MvPoly":
        c = _coerce_k(c)
        if c.is_zero():
            return MvPoly.zero(self.nvars)
        return self._new({i: a * c for i, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MvPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        o = self._lift(other)
        if len(o.terms) == 1:
            (mj, cj), = o.terms.items()
            return self._new({tuple(a + b for a, b in zip(i, mj)): c * cj for i, c in self.terms.items()})
        terms: dict = {}
        for i, a in self.terms.items():
            for j, b in o.terms.items():
                k = tuple(x + y for x, y in zip(i, j))
                v = terms.get(k)
                terms[k] = a * b if v is None else v + a * b
        return self._new({k: v for k, v in terms.items() if not v.is_zero()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MvPoly):
            if other.is_constant() and not other.is_zero():
                other = other.constant_coeff()
            else:
                return exact_div(self, other)
        try:
            c = _coerce_k(other)
        except TypeError:
            return NotImplemented
        return self.scale(c.inverse())

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = MvPoly.one(self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MvPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == self._lift(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # calculus and evaluation ---------------------------------------------
    def diff(self, j: int) -> "MvPoly":
        terms = {}
        for i, c in self.terms.items():
            if i[j]:
                k = list(i)
                k[j] -= 1
                terms[tuple(k)] = c * i[j]
        return self._new(terms)

    def map_coeffs(self, fn) -> "MvPoly":
        return MvPoly({i: fn(c) for i, c in self.terms.items()}, self.nvars)

    def evaluate(self, values: Sequence) -> RationalFunction:
        """F(u) for u in K^n."""
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        vals = [_coerce_k(v) for v in values]
        cache: list[dict[int, RationalFunction]] = [{0: ONE} for _ in vals]

        def power(j, e):
            c = cache[j]
            if e not in c:
                c[e] = vals[j] ** e
            return c[e]

        total = ZERO
        for i, a in self.terms.items():
            term = a
            for j, e in enumerate(i):
                if e:
                    term = term * power(j, e)
            total = total + term
        return total

    def __call__(self, *values):
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = values[0]
        return self.evaluate(values)

    def substitute(self, j: int, value) -> "MvPoly":
        """Specialize x_j := value (in K) and drop that variable."""
        value = _coerce_k(value)
        terms: dict = {}
        for i, c in self.terms.items():
            k = i[:j] + i[j + 1 :]
            v = c * value ** i[j] if i[j] else c
            terms[k] = terms[k] + v if k in terms else v
        return MvPoly(terms, self.nvars - 1)

    def coeffs_in(self, j: int) -> dict[int, "MvPoly"]:
        """View as a polynomial in x_j: {power: coefficient free of x_j}."""
        out: dict[int, dict] = {}
        for i, c in self.terms.items():
            k = i[:j] + (0,) + i[j + 1 :]
            out.setdefault(i[j], {})[k] = c
        return {e: self._new(t) for e, t in out.items()}

    def extend(self, nvars: int, offset: int = 0) -> "MvPoly":
        """Embed into more variables, shifting existing ones by ``offset``."""
        terms = {}
        for i, c in self.terms.items():
            k = [0] * nvars
            k[offset : offset + self.nvars] = i
            terms[tuple(k)] = c
        return MvPoly(terms, nvars, _clean=True)

    # printing ----------------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{j + 1}" for j in range(self.nvars)]
        out = ""
        for i in self.support:
            c = self.terms[i]
            sign = "+"
            if c.is_constant() and c.constant_value() < 0:
                sign, c = "-", -c
            mono = "*".join(
                names[j] if e == 1 else f"{names[j]}^{e}" for j, e in enumerate(i) if e
            )
            cs = str(c)
            simple = c.is_constant() and "/" not in cs
            if not mono:
                part = cs if simple else f"({cs})"
            elif c == ONE:
                part = mono
            elif simple:
                part = f"{cs}*{mono}"
            else:
                part = f"({cs})*{mono}"
            if not out:
                out = part if sign == "+" else "-" + part
            else:
                out += f" {sign} {part}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MvPoly('{self}', nvars={self.nvars})"


# heights ---------------------------------------------------------------------
def _require_nonzero(F: MvPoly):
    if F.is_zero():
        raise FieldError("zero polynomial")


def gauss_valuation(F: MvPoly, p: ClosedPoint) -> int:
    """v_p(F) = min over coefficients of v_p(a_i)."""
    _require_nonzero(F)
    return min(valuation(a, p) for a in F.terms.values())


def coefficient_places(F: MvPoly) -> list[ClosedPoint]:
    pts = set()
    for a in F.terms.values():
        pts.update(places(a))
    return sorted(pts)


def mv_height(F: MvPoly) -> int:
    """h(F) = sum_p -v_p(F)."""
    _require_nonzero(F)
    return projective_height(F.coefficients())


def relevant_height(F: MvPoly) -> int:
    """The relevant height: sum_p -min(0, v_p(F))."""
    _require_nonzero(F)
    return projective_height([ONE] + F.coefficients())


# division and gcd ------------------------------------------------------------
class DivisionError(ArithmeticError):
    pass


def _divides_mono(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def divmod_grlex(A: MvPoly, B: MvPoly) -> tuple[MvPoly, MvPoly]:
    """Multivariate division by a single divisor in graded-lex order."""
    if B.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lmB = B.leading_monomial()
    inv = B.terms[lmB].inverse()
    rest = dict(A.terms)
    quo: dict = {}
    rem: dict = {}
    keyf = grlex_key
    while rest:
        lm = max(rest, key=keyf)
        lc = rest.pop(lm)
        if _divides_mono(lmB, lm):
            shift = tuple(x - y for x, y in zip(lm, lmB))
            q = lc * inv
            quo[shift] = q
            for i, c in B.terms.items():
                if i == lmB:
                    continue
                k = tuple(x + y for x, y in zip(i, shift))
                v = rest.get(k, ZERO) - q * c
                if v.is_zero():
                    rest.pop(k, None)
                else:
                    rest[k] = v
        else:
            rem[lm] = lc
    return A._new(quo), A._new(rem)


def exact_div(A: MvPoly, B: MvPoly) -> MvPoly:
    q, r = divmod_grlex(A, B)
    if not r.is_zero():
        raise DivisionError("inexact polynomial division")
    return q


def divides(B: MvPoly, A: MvPoly) -> bool:
    if A.is_zero():
        return True
    if B.is_zero():
        return False
    return divmod_grlex(A, B)[1].is_zero()


def _main_var(*polys: MvPoly):
    present = set()
    for P in polys:
        present.update(P.variables())
    return min(present) if present else None


def content_in(F: MvPoly, j: int) -> MvPoly:
    """gcd of the coefficients of F viewed as a polynomial in x_j (monic)."""
    g = None
    for c in sorted(F.coeffs_in(j).values(), key=lambda P: (len(P.terms), P.total_degree())):
        g = c.monic() if g is None else mv_gcd(g, c)
        if g.is_constant():
            return MvPoly.one(F.nvars)
    return g if g is not None else MvPoly.zero(F.nvars)


def primitive_part(F: MvPoly, j: int) -> MvPoly:
    c = content_in(F, j)
    P = F if c.is_constant() else exact_div(F, c)
    return P.monic()


def prem(A: MvPoly, B: MvPoly, j: int) -> MvPoly:
    """Pseudo-remainder of A by B in the variable x_j."""
    dB = B.degree_in(j)
    cB = B.coeffs_in(j)
    lcB = cB[dB]
    R = A
    e = A.degree_in(j) - dB + 1
    xj = MvPoly.var(j, A.nvars)
    while not R.is_zero() and R.degree_in(j) >= dB:
        dR = R.degree_in(j)
        lcR = R.coeffs_in(j)[dR]
        R = lcB * R - lcR * xj ** (dR - dB) * B
        e -= 1
    if e > 0 and not R.is_zero():
        R = lcB**e * R
    return R


def mv_gcd(F: MvPoly, G: MvPoly) -> MvPoly:
    """Monic gcd in K[x1..xn] via recursive primitive PRS."""
    if F.nvars != G.nvars:
        raise ValueError("arity mismatch")
    if F.is_zero():
        return G.monic()
    if G.is_zero():
        return F.monic()
    j = _main_var(F, G)
    if j is None:
        return MvPoly.one(F.nvars)
    if F.degree_in(j) <= 0:
        return mv_gcd(F, content_in(G, j))
    if G.degree_in(j) <= 0:
        return mv_gcd(content_in(F, j), G)
    cF, cG = content_in(F, j), content_in(G, j)
    A = F if cF.is_constant() else exact_div(F, cF)
    B = G if cG.is_constant() else exact_div(G, cG)
    c = mv_gcd(cF, cG)
    A, B = A.monic(), B.monic()
    if A.degree_in(j) < B.degree_in(j):
        A, B = B, A
    while not B.is_zero():
        R = prem(A, B, j)
        A = B
        if R.is_zero():
            break
        if R.degree_in(j) <= 0:
            A = MvPoly.one(F.nvars)
            break
        B = primitive_part(R, j)
    g = primitive_part(A, j) if A.degree_in(j) > 0 else MvPoly.one(F.nvars)
    return (c * g).monic()


def is_coprime(F: MvPoly, G: MvPoly) -> bool:
    return mv_gcd(F, G).is_constant()


# squarefree and d-th power structure --------------------------------------
def monomial_content(F: MvPoly) -> Monomial:
    _require_nonzero(F)
    return tuple(min(i[j] for i in F.terms) for j in range(F.nvars))


def _yun_in(P: MvPoly, j: int) -> list[tuple[MvPoly, int]]:
    dP = P.diff(j)
    a0 = mv_gcd(P, dP)
    b = exact_div(P, a0)
    c = exact_div(dP, a0)
    d = c - b.diff(j)
    out = []
    i = 1
    while b.degree_in(j) > 0:
        a = mv_gcd(b, d)
        b = exact_div(b, a)
        c = exact_div(d, a)
        d = c - b.diff(j)
        if not a.is_constant():
            out.append((a.monic(), i))
        i += 1
    return out


def squarefree_decomposition(F: MvPoly) -> tuple[RationalFunction, list[tuple[MvPoly, int]]]:
    """F = lc * prod S_k^k with S_k monic, squarefree, pairwise coprime."""
    _require_nonzero(F)
    lc = F.leading_coeff()
    j = _main_var(F)
    if j is None:
        return lc, []
    c = content_in(F, j)
    P = F if c.is_constant() else exact_div(F, c)
    parts: dict[int, MvPoly] = {}
    if not c.is_constant():
        for S, k in squarefree_decomposition(c)[1]:
            parts[k] = parts[k] * S if k in parts else S
    for S, k in _yun_in(P.monic(), j):
        parts[k] = parts[k] * S if k in parts else S
    return lc, [(parts[k].monic(), k) for k in sorted(parts)]


@dataclass(frozen=True)
class DthPowerDecomposition:
    """F = a * x^i * G^d * P with P d-th power free and monomial-free."""

    a: RationalFunction
    monomial: Monomial
    G: MvPoly
    P: MvPoly
    d: int

    def expand(self) -> MvPoly:
        mono = MvPoly.monomial(self.monomial, self.a)
        return mono * self.G**self.d * self.P

    @property
    def is_trivial_form(self) -> bool:
        """True iff F = a x^i G^d, i.e. P lies in K."""
        return self.P.is_constant()


def dth_power_free_decompose(F: MvPoly, d: int) -> DthPowerDecomposition:
    if d < 2:
        raise ValueError("d must be at least 2")
    _require_nonzero(F)
    mono = monomial_content(F)
    F1 = F
    if any(mono):
        F1 = F._new({tuple(x - y for x, y in zip(i, mono)): c for i, c in F.terms.items()})
    lc, parts = squarefree_decomposition(F1)
    n = F.nvars
    G = MvPoly.one(n)
    P = MvPoly.one(n)
    for S, k in parts:
        if k // d:
            G = G * S ** (k // d)
        if k % d:
            P = P * S ** (k % d)
    return DthPowerDecomposition(lc, mono, G.monic(), P.monic(), d)


def is_dth_power_free(F: MvPoly, d: int) -> bool:
    _, parts = squarefree_decomposition(F)
    return all(k < d for _, k in parts)


# factored forms ----------------------------------------------------------
def quadratic_rank(P: MvPoly) -> int:
    """Rank over K of the symmetric matrix of the homogenized quadratic."""
    from .linalg import k_rank

    n = P.nvars
    m = [[ZERO] * (n + 1) for _ in range(n + 1)]
    for i, c in P.terms.items():
        idx = [j + 1 for j, e in enumerate(i) for _ in range(e)]
        idx += [0] * (2 - len(idx))
        a, b = idx
        if a == b:
            m[a][a] = m[a][a] + c
        else:
            half = c * RationalFunction.constant(flint.fmpq(1, 2))
            m[a][b] = m[a][b] + half
            m[b][a] = m[b][a] + half
    return k_rank(m)


def certify_irreducible(P: MvPoly) -> bool | None:
    """True if P is certified absolutely irreducible, None if undecided.

    Degree 1 is irreducible; a degree-2 polynomial is certified when its
    homogenized quadratic form has rank >= 3 (no split into linear forms
    over an algebraic closure).  Higher degrees are taken as declared.
    """
    deg = P.total_degree()
    if deg == 1:
        return True
    if deg == 2:
        return True if quadratic_rank(P) >= 3 else None
    return None


@dataclass
class FactoredForm:
    """a * x^i * prod P_j^{e_j} with pairwise coprime, declared-irreducible P_j."""

    constant: RationalFunction
    monomial: Monomial
    factors: list[tuple[MvPoly, int]] = field(default_factory=list)

    def __post_init__(self):
        self.constant = _coerce_k(self.constant)
        self.monomial = tuple(self.monomial)
        for P, e in self.factors:
            if e < 1:
                raise ValueError("multiplicities must be positive")
            if P.is_constant():
                raise ValueError("factors must be nonconstant")
            if P.nvars != len(self.monomial):
                raise ValueError("factor arity mismatch")
        for a in range(len(self.factors)):
            for b in range(a + 1, len(self.factors)):
                if not is_coprime(self.factors[a][0], self.factors[b][0]):
                    raise ValueError("declared factors are not pairwise coprime")

    @classmethod
    def of(cls, factors: Iterable[tuple[MvPoly, int]], constant=ONE) -> "FactoredForm":
        factors = list(factors)
        n = factors[0][0].nvars
        return cls(constant, (0,) * n, factors)

    @property
    def nvars(self) -> int:
        return len(self.monomial)

    def expand(self) -> MvPoly:
        F = MvPoly.monomial(self.monomial, self.constant)
        for P, e in self.factors:
            F = F * P**e
        return F

    def radical(self) -> MvPoly:
        F = MvPoly.one(self.nvars)
        for P, _ in self.factors:
            F = F * P
        return F

    def degree(self) -> int:
        return sum(self.monomial) + sum(e * P.total_degree() for P, e in self.factors)


def F_e_u(factors: FactoredForm, u) -> MvPoly:
    """sum_i e_i D_u(P_i) prod_{j != i} P_j."""
    from .derivation import D_u

    if not factors.factors:
        raise ValueError("need at least one factor")
    Ps = [P for P, _ in factors.factors]
    total = MvPoly.zero(factors.nvars)
    for i, (P, e) in enumerate(factors.factors):
        term = D_u(P, u) * e
        for k, Q in enumerate(Ps):
            if k != i:
                term = term * Q
        total = total + term
    return total


@dataclass(frozen=True)
class CoprimeCriterion:
    coprime: bool
    #: (i, j, constant ratio a_i u^i / a_j u^j) for every pair checked
    witnesses: tuple
    gcd_agrees: bool


def coprime_criterion_irreducible(P: MvPoly, u) -> CoprimeCriterion:
    """Decide whether P and D_u(P) are coprime from coefficient ratios.

    For irreducible P they fail to be coprime exactly when every ratio
    a_i u^i / a_j u^j is a constant.  The verdict is cross-checked with
    :func:`mv_gcd`.
    """
    from .derivation import D_u, unit_values

    if P.is_monomial() or P.is_zero():
        raise ValueError("criterion needs a non-monomial polynomial")
    us = unit_values(u, P.nvars)
    support = P.support
    j0 = support[0]

    def weight(i):
        w = P.terms[i]
        for uk, e in zip(us, i):
            if e:
                w = w * uk**e
        return w

    w0 = weight(j0)
    witnesses = []
    coprime = False
    for i in support[1:]:
        ratio = w0 / weight(i)
        if not ratio.is_constant():
            coprime = True
            break
        witnesses.append((j0, i, ratio.constant_value()))
    by_gcd = is_coprime(P, D_u(P, us))
    return CoprimeCriterion(coprime, tuple(witnesses) if not coprime else (), by_gcd == coprime)
