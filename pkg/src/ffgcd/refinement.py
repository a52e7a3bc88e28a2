"""Linear forms attached to the ideal (F1, F2) and the gcd inequalities they give.

Everything here is built exactly: the shifted basis of (F1, F2)_m, the
per-place greedy monomial bases of the quotient, the forms L_{p,i} with
their determinant normalization, Weil functions, and both sides of every
inequality in the gcd chain.  The second main theorem with moving targets
is evaluated as an oracle inequality only on instances whose
nondegeneracy hypothesis has been verified by an exact rank computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .divlattice import UnitTuple
from .ffcore import (
    ONE,
    ZERO,
    VAL_INF,
    ClosedPoint,
    FieldError,
    PlaceSet,
    Poly,
    RationalFunction,
    gcd_counting,
    height,
    is_S_unit,
    projective_height,
    valuation,
)
from .linalg import (
    SingularMatrixError,
    cleared_polys,
    common_denominator,
    k_det,
    k_inverse,
    k_matmul,
    PolySpan,
    q_rank_polys,
)
from .mvpoly import MvPoly, gauss_valuation, grlex_key, is_coprime, mv_height


class CapExceeded(RuntimeError):
    """A configured size guard was hit; the instance is skipped, not failed."""


class DimensionMismatch(FieldError):
    """The shifted generators do not span a space of the predicted dimension."""


@dataclass(frozen=True)
class Caps:
    max_m: int = 8
    max_n: int = 3
    max_r: int = 3
    max_products: int = 5000


DEFAULT_CAPS = Caps()


def monomials_upto(n: int, m: int) -> list[tuple]:
    """All exponent tuples of total degree <= m, graded-lex ascending."""
    out = []

    def rec(prefix, left, k):
        if k == n:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, k + 1)

    rec([], m, 0)
    return sorted(out, key=grlex_key)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _fmt(q) -> int | str:
    """Exact number for reports: int when integral, else 'p/q'."""
    if q == VAL_INF:
        return "inf"
    q = _frac(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# coefficient spaces V(r) ---------------------------------------------------------
class CoefficientSpace:
    """V(r): the Q-span of all r-fold products of the given elements of K.

    With L the common denominator of the generators a_j = p_j / L, an r-fold
    product equals (prod p_j) / L^r, so V(r) is isomorphic to the span of
    r-fold products of the polynomials p_j.  Bases are grown one factor at
    a time: V(r) = span(basis(V(r-1)) * {p_j}).
    """

    def __init__(self, elements: Sequence, max_products: int = DEFAULT_CAPS.max_products):
        elems = [RationalFunction.coerce(e) for e in elements]
        elems = [e for e in elems if not e.is_zero()]
        if not elems:
            raise FieldError("coefficient space of no nonzero elements")
        self.elements = elems
        self.den = common_denominator(elems)
        gens = cleared_polys(elems)
        self.generators: list[Poly] = PolySpan(gens).basis()
        self.max_products = max_products
        self._spans: list[PolySpan] = [PolySpan([Poly([1])])]

    def span(self, r: int) -> PolySpan:
        if r < 0:
            raise ValueError("r must be nonnegative")
        while len(self._spans) <= r:
            prev = self._spans[-1].basis()
            count = len(prev) * len(self.generators)
            if count > self.max_products:
                raise CapExceeded(
                    f"cap exceeded: V({len(self._spans)}) needs {count} products (cap {self.max_products})"
                )
            nxt = PolySpan()
            for b in prev:
                for p in self.generators:
                    nxt.add(b * p)
            self._spans.append(nxt)
        return self._spans[r]

    def dim(self, r: int) -> int:
        """d_r; d_0 = 1 (the constants)."""
        return len(self.span(r))

    def dims(self, r: int) -> list[int]:
        return [self.dim(k) for k in range(r + 1)]

    def basis_elements(self, r: int) -> list[RationalFunction]:
        scale = RationalFunction(Poly([1]), self.den**r)
        return [RationalFunction(p) * scale for p in self.span(r).basis()]

    def contains(self, x, r: int) -> bool:
        x = RationalFunction.coerce(x)
        if x.is_zero():
            return True
        y = x * RationalFunction(self.den**r)
        if not y.is_polynomial():
            return False
        return self.span(r).contains(y.num)


def coefficient_space(elements: Sequence, r: int, max_products: int = DEFAULT_CAPS.max_products) -> CoefficientSpace:
    if r < 1:
        raise ValueError("r must be at least 1")
    cs = CoefficientSpace(elements, max_products)
    cs.span(r)
    return cs


def is_nondegenerate_over(values: Sequence, space: CoefficientSpace, r: int) -> bool:
    """Are the y_i linearly nondegenerate over V(r)?

    Equivalent to Q-independence of all products e * y_i with e running
    over a basis of V(r); decided by exact rank after clearing denominators.
    """
    ys = [RationalFunction.coerce(y) for y in values]
    if any(y.is_zero() for y in ys):
        return False
    es = space.span(r).basis()
    yp = cleared_polys(ys)
    total = len(es) * len(yp)
    if total > space.max_products * 4:
        raise CapExceeded(f"cap exceeded: nondegeneracy test needs {total} products")
    polys = [e * y for y in yp for e in es]
    width = max(p.degree() for p in polys) + 1
    if total > width:
        return False
    return q_rank_polys(polys) == total


# parameters and the ideal basis ------------------------------------------------
@dataclass(frozen=True)
class RefinementParams:
    n: int
    d: int
    m: int
    r: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.m < 2 * self.d:
            raise ValueError(f"m = {self.m} must be at least 2d = {2 * self.d}")
        if self.r < 1:
            raise ValueError("r must be positive")

    @property
    def M(self) -> int:
        return 2 * comb(self.m + self.n - self.d, self.n) - comb(self.m + self.n - 2 * self.d, self.n)

    @property
    def M_prime(self) -> int:
        return comb(self.m + self.n, self.n) - self.M


def choose_m(n: int, d: int, eps: Fraction, limit: int = 10_000) -> int:
    """Least m >= 2d with M' m n / M <= eps / 4."""
    eps = _frac(eps)
    for m in range(2 * d, limit):
        p = RefinementParams(n, d, m)
        if Fraction(p.M_prime * m * n, p.M) <= eps / 4:
            return m
    raise ValueError("no admissible m below the search limit")


def _has_unit_coefficient(F: MvPoly) -> bool:
    return any(c == ONE for c in F.terms.values())


@dataclass
class IdealBasis:
    F1: MvPoly
    F2: MvPoly
    params: RefinementParams
    monomials: list
    #: (shift exponent, which polynomial 1|2) per basis element phi_l
    shifts: list
    phis: list
    #: coefficient rows of the phi_l over ``monomials``
    rows: list
    rank: int
    top_forms_coprime: bool

    @property
    def M(self) -> int:
        return self.params.M

    @property
    def M_prime(self) -> int:
        return self.params.M_prime

    @property
    def codimension(self) -> int:
        return len(self.monomials) - self.rank

    def evaluate(self, g: Sequence) -> list[RationalFunction]:
        return [phi.evaluate(list(g)) for phi in self.phis]


class _SemiEchelon:
    """Rows over K kept so a single in-order pass reduces any vector."""

    def __init__(self):
        self.rows: list[tuple[int, list]] = []

    def reduce(self, vec: list) -> list:
        vec = list(vec)
        for pc, row in self.rows:
            f = vec[pc]
            if not f.is_zero():
                vec = [x - f * y if not y.is_zero() else x for x, y in zip(vec, row)]
        return vec

    def add(self, vec: list) -> bool:
        v = self.reduce(vec)
        pc = next((k for k, x in enumerate(v) if not x.is_zero()), None)
        if pc is None:
            return False
        inv = v[pc].inverse()
        self.rows.append((pc, [x * inv if not x.is_zero() else x for x in v]))
        return True

    def copy(self) -> "_SemiEchelon":
        c = _SemiEchelon()
        c.rows = list(self.rows)
        return c


def _top_form(F: MvPoly) -> MvPoly:
    d = F.total_degree()
    return MvPoly({i: c for i, c in F.terms.items() if sum(i) == d}, F.nvars)


def build_ideal_basis(F1: MvPoly, F2: MvPoly, m: int, caps: Caps = DEFAULT_CAPS) -> IdealBasis:
    n = F1.nvars
    if F2.nvars != n:
        raise ValueError("F1 and F2 must have the same number of variables")
    if n > caps.max_n or m > caps.max_m:
        raise CapExceeded(f"cap exceeded: n = {n}, m = {m} (caps n <= {caps.max_n}, m <= {caps.max_m})")
    d = F1.total_degree()
    if d < 1 or F2.total_degree() != d:
        raise ValueError("F1 and F2 must be nonconstant of the same degree")
    if m < 2 * d:
        raise ValueError(f"m = {m} must be at least 2d = {2 * d}")
    if not (_has_unit_coefficient(F1) and _has_unit_coefficient(F2)):
        raise ValueError("each of F1, F2 needs a coefficient equal to 1")
    if not is_coprime(F1, F2):
        raise ValueError("F1 and F2 are not coprime")
    params = RefinementParams(n, d, m)
    monos = monomials_upto(n, m)
    index = {i: k for k, i in enumerate(monos)}
    ech = _SemiEchelon()
    shifts, phis, rows = [], [], []
    for i in monomials_upto(n, m - d):
        for j, F in ((1, F1), (2, F2)):
            phi = F * MvPoly.monomial(i)
            row = [ZERO] * len(monos)
            for mono, c in phi.terms.items():
                row[index[mono]] = c
            if ech.add(row):
                shifts.append((i, j))
                phis.append(phi)
                rows.append(row)
    rank = len(rows)
    if rank != params.M:
        raise DimensionMismatch(f"shifts span dimension {rank}, expected M = {params.M}")
    basis = IdealBasis(F1, F2, params, monos, shifts, phis, rows, rank,
                       is_coprime(_top_form(F1), _top_form(F2)))
    basis._echelon = ech  # reused by the point bases
    return basis


@dataclass(frozen=True)
class IdealDimensionProbe:
    m: int
    extra: int
    shifts_dim: int
    ideal_dim: int

    @property
    def gap(self) -> int:
        """dim (F1, F2)_m - dim span{x^i F_j : |i| <= m - d}, as far as the probe sees."""
        return self.ideal_dim - self.shifts_dim


def ideal_dimension_probe(F1: MvPoly, F2: MvPoly, m: int, extra: int = 2) -> IdealDimensionProbe:
    """Lower bound for dim of the degree <= m part of the ideal (F1, F2).

    Shifts x^i F_j of total degree up to m + extra span a space V; the
    elements of V of degree <= m form the kernel of the projection onto
    monomials of degree > m, so their dimension is dim V - rank of that
    projection.  With extra = 0 this is the span used by the construction.
    """
    n, d = F1.nvars, F1.total_degree()
    top = m + extra
    monos = monomials_upto(n, top)
    index = {i: k for k, i in enumerate(monos)}
    high = [k for k, i in enumerate(monos) if sum(i) > m]
    full, proj, base = _SemiEchelon(), _SemiEchelon(), _SemiEchelon()
    for F in (F1, F2):
        dF = F.total_degree()
        for i in monomials_upto(n, top - dF):
            row = [ZERO] * len(monos)
            for mono, c in (F * MvPoly.monomial(i, ONE) if any(i) else F).terms.items():
                row[index[mono]] = c
            full.add(row)
            proj.add([row[k] for k in high])
            if sum(i) <= m - d and dF == d:
                base.add(row)
    return IdealDimensionProbe(m, extra, len(base.rows), len(full.rows) - len(proj.rows))


# per-place bases -------------------------------------------------------------------
@dataclass
class PointBasis:
    place: ClosedPoint
    #: I_p in selection order
    chosen: list
    #: i_p(1..M) in graded-lex order
    complement: list
    valuations: dict

    def chain_holds(self) -> bool:
        """The chosen valuations are nonincreasing in selection order."""
        vs = [self.valuations[i] for i in self.chosen]
        return all(a >= b for a, b in zip(vs, vs[1:]))

    def dominates_complement(self) -> bool:
        """Every chosen valuation is >= every complement valuation.

        This stronger form fails whenever a monomial of large valuation
        is already congruent to a combination of earlier choices (for
        example when it lies in the ideal); it is reported, not required.
        """
        low = min((self.valuations[i] for i in self.chosen), default=None)
        return low is None or all(self.valuations[i] <= low for i in self.complement)

    def reduction_respects_order(self, c: Sequence[Sequence[RationalFunction]]) -> bool:
        """c_{i,j} != 0 only when v(g^{i_j}) >= v(g^{i_p(i)}): what the greedy choice guarantees."""
        for i, mono in enumerate(self.complement):
            v = self.valuations[mono]
            for j, cj in enumerate(c[i]):
                if not cj.is_zero() and self.valuations[self.chosen[j]] < v:
                    return False
        return True


def monomial_valuation(i: Sequence[int], vg: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(i, vg))


def build_point_basis(basis: IdealBasis, g, p: ClosedPoint) -> PointBasis:
    gs = list(getattr(g, "entries", g))
    vg = [valuation(RationalFunction.coerce(x), p) for x in gs]
    monos = basis.monomials
    vals = {i: monomial_valuation(i, vg) for i in monos}
    # greedy over a matroid: scan by valuation desc, graded-lex least first
    order = sorted(range(len(monos)), key=lambda k: (-vals[monos[k]], grlex_key(monos[k])))
    ech = basis._echelon.copy()
    chosen = []
    for k in order:
        if len(chosen) == basis.M_prime:
            break
        vec = [ZERO] * len(monos)
        vec[k] = ONE
        if ech.add(vec):
            chosen.append(monos[k])
    if len(chosen) != basis.M_prime:
        raise DimensionMismatch("quotient basis has the wrong size")
    cs = set(chosen)
    complement = [i for i in monos if i not in cs]
    pb = PointBasis(p, chosen, complement, vals)
    if not pb.chain_holds():
        raise AssertionError(f"greedy selection is not monotone at {p}")
    return pb


# linear forms ---------------------------------------------------------------------
@dataclass
class LinearFormSystem:
    place: ClosedPoint
    pbasis: PointBasis
    c_p: RationalFunction
    #: b[i][l], the coefficient of y_l in L_{p,i}
    b: list
    #: c[i][j] = c_{p,i,j}
    c: list
    alpha: list
    alpha_rest: list
    in_V_M_minus_1: bool | None = None

    def form(self, i: int) -> list:
        return self.b[i]


def build_linear_forms(basis: IdealBasis, pbasis: PointBasis, space: CoefficientSpace | None = None) -> LinearFormSystem:
    index = {mono: k for k, mono in enumerate(basis.monomials)}
    comp = [index[i] for i in pbasis.complement]
    rest = [index[i] for i in pbasis.chosen]
    alpha = [[row[s] for s in comp] for row in basis.rows]
    alpha_rest = [[row[s] for s in rest] for row in basis.rows]
    c_p = k_det(alpha)
    if c_p.is_zero():
        raise SingularMatrixError("alpha matrix is singular; the point basis is inconsistent")
    inv = k_inverse(alpha)
    # b = c_p * alpha^{-1}; rows of b index the forms, columns the y_l
    b_t = [[c_p * x for x in row] for row in inv]
    # alpha^{-1} is (s, l)-indexed with alpha (l, s); b_{i,l} = c_p * inv[i][l]
    b = b_t
    M = basis.M
    ba = k_matmul(b, alpha)
    for i in range(M):
        for s in range(M):
            want = c_p if i == s else ZERO
            if ba[i][s] != want:
                raise AssertionError("b * alpha != c_p * I")
    bar = k_matmul(b, alpha_rest)
    c = [[x / c_p for x in row] for row in bar]
    # polynomial identity L_{p,i}(Phi(x)) = c_p (x^{i_p(i)} + sum_j c_{p,i,j} x^{i_{p,j}})
    for i in range(M):
        lhs = [ZERO] * len(basis.monomials)
        for l, row in enumerate(basis.rows):
            if not b[i][l].is_zero():
                lhs = [x + b[i][l] * y if not y.is_zero() else x for x, y in zip(lhs, row)]
        rhs = [ZERO] * len(basis.monomials)
        rhs[comp[i]] = c_p
        for j, k in enumerate(rest):
            rhs[k] = c_p * c[i][j]
        if lhs != rhs:
            raise AssertionError(f"form {i} does not reproduce its reduction identity")
    membership = None
    if space is not None:
        try:
            membership = all(space.contains(x, M - 1) for row in b for x in row)
        except CapExceeded:
            membership = None
        if membership is False:
            raise AssertionError("a form coefficient lies outside V(M-1)")
    return LinearFormSystem(pbasis.place, pbasis, c_p, b, c, alpha, alpha_rest, membership)


# Weil functions ----------------------------------------------------------------------
def _vmin(xs: Sequence[RationalFunction], p: ClosedPoint):
    return min(valuation(x, p) for x in xs)


def weil_function(L: Sequence, a: Sequence, p: ClosedPoint) -> int:
    """lambda_{L,p}(a) = v_p(L(a)) - v_p(a) - v_p(L)."""
    L = [RationalFunction.coerce(x) for x in L]
    a = [RationalFunction.coerce(x) for x in a]
    if len(L) != len(a):
        raise ValueError("form and point have different lengths")
    val = ZERO
    for x, y in zip(L, a):
        if not x.is_zero() and not y.is_zero():
            val = val + x * y
    if val.is_zero():
        raise FieldError("L(a) = 0: the Weil function has a pole here")
    if all(x.is_zero() for x in a) or all(x.is_zero() for x in L):
        raise FieldError("zero form or zero point")
    lam = valuation(val, p) - _vmin(a, p) - _vmin(L, p)
    if lam < 0:
        raise AssertionError("negative Weil function value")
    return lam


def _max_weighted(x):
    return max(0, x)


# the key inequality and the gcd chain --------------------------------------------------
@dataclass
class RefinementReport:
    params: dict
    branch: str
    margins: dict
    key_margins: list
    chain_ok: bool
    nondegenerate: bool | None
    codimension: int
    M_prime: int
    dims: dict
    notes: list = field(default_factory=list)

    @property
    def finding(self) -> bool:
        bad = [k for k, v in self.margins.items() if v is not None and v < 0]
        return bool(bad) or any(m < 0 for m in self.key_margins) or not self.chain_ok

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "branch": self.branch,
            "margins": {k: (_fmt(v) if v is not None else None) for k, v in sorted(self.margins.items())},
            "min_key_margin": _fmt(min(self.key_margins)) if self.key_margins else None,
            "key_count": len(self.key_margins),
            "chain_ok": self.chain_ok,
            "nondegenerate": self.nondegenerate,
            "codimension": self.codimension,
            "M_prime": self.M_prime,
            "dims": self.dims,
            "notes": list(self.notes),
            "finding": self.finding,
        }


def _check_units(gs, S: PlaceSet):
    for x in gs:
        if not is_S_unit(x, S):
            raise FieldError(f"{x} is not an S-unit for S = {{{S}}}")


def key_inequality_check(
    F1: MvPoly,
    F2: MvPoly,
    g,
    S: PlaceSet,
    m: int,
    r: int = 1,
    genus: int = 0,
    caps: Caps = DEFAULT_CAPS,
    check_nondegeneracy: bool = True,
) -> RefinementReport:
    """Build every L_{p,i} for p in S and evaluate the whole inequality chain."""
    if r > caps.max_r:
        raise CapExceeded(f"cap exceeded: r = {r} (cap {caps.max_r})")
    gs = [RationalFunction.coerce(x) for x in getattr(g, "entries", g)]
    _check_units(gs, S)
    basis = build_ideal_basis(F1, F2, m, caps)
    prm = RefinementParams(basis.params.n, basis.params.d, m, r)
    M, Mp, n = prm.M, prm.M_prime, prm.n
    coeffs = list(F1.terms.values()) + list(F2.terms.values())
    space = CoefficientSpace(coeffs, caps.max_products)
    phis_g = basis.evaluate(gs)
    if all(x.is_zero() for x in phis_g):
        raise FieldError("degenerate evaluation: Phi(g) vanishes identically")
    maxh = max(height(x) for x in gs)
    hF1, hF2 = mv_height(F1), mv_height(F2)
    kappa = max(0, 2 * genus - 2 + S.size)
    notes = []
    undominated = []
    key_margins = []
    lam_total = 0
    main_term = 0
    chain_ok = True
    lam_defined = True
    for p in S:
        pb = build_point_basis(basis, gs, p)
        try:
            sysp = build_linear_forms(basis, pb, space if M <= 12 else None)
        except SingularMatrixError as exc:
            raise AssertionError(str(exc)) from None
        chain_ok = chain_ok and pb.chain_holds() and pb.reduction_respects_order(sysp.c)
        if not pb.dominates_complement():
            undominated.append(str(p))
        vF = gauss_valuation(F1, p) + gauss_valuation(F2, p)
        v_phi = _vmin([x for x in phis_g if not x.is_zero()], p)
        for i, mono in enumerate(pb.complement):
            form = sysp.b[i]
            val = ZERO
            for x, y in zip(form, phis_g):
                if not x.is_zero() and not y.is_zero():
                    val = val + x * y
            vL = _vmin(form, p)
            vg = pb.valuations[mono]
            main_term += vg * p.degree
            if val.is_zero():
                lam_defined = False
                continue
            lhs = valuation(val, p) - vL
            key_margins.append(lhs - (vg + vF))
            lam_total += (valuation(val, p) - v_phi - vL) * p.degree
    hPhi = projective_height([x for x in phis_g if not x.is_zero()])
    n_gcd = gcd_counting(F1.evaluate(gs), F2.evaluate(gs), S, "N") if not (
        F1.evaluate(gs).is_zero() or F2.evaluate(gs).is_zero()) else None
    if n_gcd is None:
        raise FieldError("F1(g) or F2(g) vanishes")
    margins: dict = {}
    margins["main_term"] = Fraction(main_term + Mp * m * n * maxh)
    margins["phi_height"] = Fraction(m * n * maxh + hF1 + hF2 - hPhi)
    dims = {}
    nondeg = None
    branch = "gcd-bound"
    margins["msmt"] = None
    margins["gcd_bound"] = None
    margins["lambda_lower"] = None
    if lam_defined:
        margins["lambda_lower"] = Fraction(lam_total - (-Mp * m * n * maxh + M * n_gcd + M * (hPhi - hF1 - hF2)))
    else:
        notes.append("some L_{p,i}(Phi(g)) vanishes")
    if check_nondegeneracy:
        try:
            w = space.dim(M * r)
            u = space.dim(M * (r - 1))
            dims = {"w": w, "u": u}
            monos_g = [_mono_value(gs, i) for i in basis.monomials]
            nondeg = is_nondegenerate_over(monos_g, space, M * r + 1)
        except CapExceeded as exc:
            notes.append(str(exc))
            nondeg = None
            branch = "cap-exceeded"
    if nondeg:
        wu = Fraction(w, u)
        rhs = wu * M * (hPhi + (r + 1) * M * (hF1 + hF2) + Fraction(M * w - 1, 2) * kappa)
        if lam_defined:
            margins["msmt"] = rhs - lam_total
        c = wu * (1 + M * (r + 1))
        cprime = Fraction(w * w * M, 2 * u)
        bound = (Mp + wu * M - M) * m * n * maxh + c * M * (hF1 + hF2) + cprime * M * kappa
        margins["gcd_bound"] = bound - M * n_gcd
    elif nondeg is False:
        branch = "precondition-unmet"
        notes.append("g^i (|i| <= m) degenerate over V(Mr+1)")
    if undominated:
        notes.append("chosen valuations do not dominate the complement at " + ", ".join(undominated))
    params = {
        "n": n, "d": prm.d, "m": m, "r": r, "M": M, "M_prime": Mp,
        "F1": F1.to_str(), "F2": F2.to_str(),
        "g": [str(x) for x in gs], "S": str(S),
        "N_gcd": n_gcd, "max_h": maxh, "h_Phi": hPhi, "h_F1": hF1, "h_F2": hF2,
        "lambda_sum": lam_total if lam_defined else None,
    }
    return RefinementReport(params, branch, margins, key_margins, chain_ok, nondeg,
                            basis.codimension, Mp, dims, notes)


def _mono_value(gs: Sequence[RationalFunction], i: Sequence[int]) -> RationalFunction:
    out = ONE
    for x, e in zip(gs, i):
        if e:
            out = out * x**e
    return out


# moving-target second main theorem as an oracle ----------------------------------------------------------------
@dataclass
class MSMTReport:
    lhs: int
    rhs: Fraction | None
    margin: Fraction | None
    nondegenerate: bool | None
    w: int | None
    u: int | None
    h_a: int
    h_L: int


def msmt_check(forms: Sequence[Sequence], a: Sequence, S: PlaceSet, r: int = 1, genus: int = 0,
               caps: Caps = DEFAULT_CAPS) -> MSMTReport:
    """sum_p max_J sum_{j in J} lambda_{L_j,p}(a) against the moving-target bound."""
    from .linalg import k_rank

    forms = [[RationalFunction.coerce(x) for x in L] for L in forms]
    a = [RationalFunction.coerce(x) for x in a]
    n1 = len(a)
    coeffs = [x for L in forms for x in L if not x.is_zero()]
    h_L = projective_height(coeffs)
    h_a = projective_height([x for x in a if not x.is_zero()])
    lhs = 0
    for p in S:
        scored = sorted(((weil_function(L, a, p), k) for k, L in enumerate(forms)), key=lambda t: (-t[0], t[1]))
        chosen: list = []
        total = 0
        for lam, k in scored:
            if len(chosen) == n1:
                break
            if k_rank(chosen + [forms[k]]) > len(chosen):
                chosen.append(forms[k])
                total += lam
        lhs += total * p.degree
    space = CoefficientSpace(coeffs, caps.max_products)
    try:
        w = space.dim(r + 1)
        u = space.dim(r)
        nondeg = is_nondegenerate_over(a, space, r + 1)
    except CapExceeded:
        return MSMTReport(lhs, None, None, None, None, None, h_a, h_L)
    if not nondeg:
        return MSMTReport(lhs, None, None, False, w, u, h_a, h_L)
    kappa = max(0, 2 * genus - 2 + S.size)
    rhs = Fraction(w, u) * n1 * (h_a + (r + 2) * h_L + Fraction((n1 - 1) * w + w - 1, 2) * kappa)
    return MSMTReport(lhs, rhs, rhs - lhs, True, w, u, h_a, h_L)


# S-part of a single polynomial at unit values ------------------------------------------------------------------------
@dataclass
class SPartReport:
    lhs: int
    rhs: Fraction | None
    margin: Fraction | None
    branch: str
    w: int
    u: int
    N: int


def s_part_check(F: MvPoly, g, S: PlaceSet, r: int = 1, genus: int = 0, caps: Caps = DEFAULT_CAPS) -> SPartReport:
    """Sum over p in S of v_p^0(F(g)) against the d-uple embedding bound."""
    if r < 1 or r > caps.max_r:
        raise CapExceeded(f"cap exceeded: r = {r} (cap {caps.max_r})") if r > caps.max_r else ValueError("r >= 1")
    gs = [RationalFunction.coerce(x) for x in getattr(g, "entries", g)]
    n = F.nvars
    if len(gs) != n:
        raise ValueError("arity mismatch")
    if F.constant_coeff().is_zero():
        raise FieldError("F vanishes at the origin")
    if not _has_unit_coefficient(F):
        raise ValueError("F needs a coefficient equal to 1")
    _check_units(gs, S)
    d = F.total_degree()
    if d < 1:
        raise ValueError("F must be nonconstant")
    val = F.evaluate(gs)
    if val.is_zero():
        raise FieldError("F(g) = 0")
    lhs = sum(max(0, valuation(val, p)) * p.degree for p in S)
    N = comb(n + d, n) - 1
    space = CoefficientSpace(list(F.terms.values()), caps.max_products)
    w = space.dim(r)
    u = space.dim(r - 1)
    monos = [_mono_value(gs, i) for i in monomials_upto(n, d)]
    if not is_nondegenerate_over(monos, space, r):
        return SPartReport(lhs, None, None, "precondition-unmet", w, u, N)
    maxh = max(height(x) for x in gs)
    kappa = max(0, 2 * genus - 2 + S.size)
    wu = Fraction(w, u)
    rhs = (wu - 1) * (N + 1) * d * n * maxh + wu * (N + 1) * (r + 1) * mv_height(F) \
        + Fraction(w * (N + 1) * (N * w + w - 1), 2 * u) * kappa
    return SPartReport(lhs, rhs, rhs - lhs, "gcd-bound", w, u, N)
