"""Exact arithmetic in the rational function field K = Q(t).

Elements are reduced fractions of ``flint.fmpq_poly`` polynomials.  Places
of K are closed points: a monic irreducible polynomial over Q (a Galois
orbit of ``deg`` geometric points) or the point at infinity.  Every count
below is weighted by the degree of the closed point, so it equals the
corresponding count over the algebraic closure of the constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import flint

Poly = flint.fmpq_poly

#: valuation of the zero element
VAL_INF = math.inf

_ONE = Poly([1])
_T = Poly([0, 1])


class FieldError(ValueError):
    """Raised when an operation receives an element it is not defined on."""


def to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    return Fraction(int(q.p), int(q.q))


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def poly_key(p: Poly) -> tuple:
    return tuple((int(c.p), int(c.q)) for c in p.coeffs())


def poly_str(p: Poly, var: str = "t") -> str:
    """Compact text in the element grammar, highest degree first."""
    if p.is_zero():
        return "0"
    parts = []
    for e in range(p.degree(), -1, -1):
        c = to_fraction(p.coeffs()[e])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    text = "".join(s + b for s, b in parts)
    return text[1:] if text.startswith("+") else text


def monic(p: Poly) -> Poly:
    return p / p.leading_coefficient()


def strip_factor(p: Poly, q: Poly) -> tuple[Poly, int]:
    """Divide ``q`` out of ``p`` as often as possible; return (rest, count)."""
    k = 0
    while p.degree() >= q.degree():
        quo, rem = divmod(p, q)
        if not rem.is_zero():
            break
        p = quo
        k += 1
    return p, k


def yun(p: Poly) -> list[tuple[Poly, int]]:
    """Squarefree decomposition of a nonzero polynomial over Q (Yun).

    Returns pairs ``(a_i, i)`` with each ``a_i`` monic, squarefree and of
    positive degree, pairwise coprime, such that ``p = lc(p) * prod a_i**i``.
    """
    if p.is_zero():
        raise FieldError("squarefree decomposition of 0")
    p = monic(p)
    if p.degree() == 0:
        return []
    dp = p.derivative()
    a0 = p.gcd(dp)
    b = p / a0
    c = dp / a0
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree() > 0:
        a = b.gcd(d)
        b = b / a
        c = d / a
        d = c - b.derivative()
        if a.degree() > 0:
            out.append((monic(a), i))
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    if p.degree() <= 0:
        return _ONE
    return monic(p / p.gcd(p.derivative()))


def _coerce_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, flint.fmpq)):
        return Poly([to_fmpq(x)])
    if isinstance(x, (list, tuple)):
        return Poly([to_fmpq(c) if not isinstance(c, flint.fmpq) else c for c in x])
    raise TypeError(f"cannot build a polynomial from {type(x).__name__}")


class RationalFunction:
    """An element num/den of Q(t), den monic and coprime to num."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None, *, reduced: bool = False):
        num = _coerce_poly(num)
        den = _ONE if den is None else _coerce_poly(den)
        if not reduced:
            if den.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if num.is_zero():
                den = _ONE
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num / g
                    den = den / g
                lc = den.leading_coefficient()
                if lc != 1:
                    num = num / lc
                    den = den / lc
        self.num = num
        self.den = den
        self._hash = None

    # construction ----------------------------------------------------------
    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(_T, reduced=True)

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Poly([to_fmpq(c)]), reduced=True)

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        from .parsing import parse_k_element

        return parse_k_element(text)

    @staticmethod
    def coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, (int, Fraction, flint.fmpq)):
            return RationalFunction.constant(x)
        if isinstance(x, Poly):
            return RationalFunction(x, reduced=True)
        raise TypeError(f"cannot coerce {type(x).__name__} into K")

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise FieldError(f"{self} is not a constant")
        if self.num.is_zero():
            return Fraction(0)
        return to_fraction(self.num.coeffs()[0])

    @property
    def deg_num(self) -> int:
        return self.num.degree()

    @property
    def deg_den(self) -> int:
        return self.den.degree()

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return ZERO
        # cross-cancel before multiplying keeps the gcds small
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        num = (self.num / g1) * (o.num / g2)
        den = (self.den / g2) * (o.den / g1)
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return RationalFunction(num, den, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in K")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return ONE
        return RationalFunction(self.num**e, self.den**e, reduced=True)

    def __eq__(self, other):
        try:
            o = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((poly_key(self.num), poly_key(self.den)))
        return self._hash

    def __call__(self, x):
        """Evaluate at a rational number."""
        q = to_fmpq(x)
        d = self.den(q)
        if d == 0:
            raise ZeroDivisionError(f"{self} has a pole at {x}")
        return to_fraction(self.num(q) / d)

    def derivative(self) -> "RationalFunction":
        """d/dt by the quotient rule."""
        if self.is_zero():
            return ZERO
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    # printing --------------------------------------------------------------
    def __str__(self):
        n = poly_str(self.num)
        if self.den.degree() == 0:
            return n
        d = poly_str(self.den)
        if any(ch in n[1:] for ch in "+-"):
            n = f"({n})"
        if any(ch in d[1:] for ch in "+-"):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction('{self}')"


ZERO = RationalFunction(0)
ONE = RationalFunction(1)
T = RationalFunction.t()


class ClosedPoint:
    """A place of Q(t): a monic irreducible ``minpoly`` or infinity."""

    __slots__ = ("kind", "minpoly", "degree", "_key")

    def __init__(self, kind: str, minpoly: Poly | None = None, *, check: bool = True):
        if kind == "infinite":
            self.kind = kind
            self.minpoly = None
            self.degree = 1
            self._key = ("inf",)
            return
        if kind != "finite" or minpoly is None:
            raise FieldError("a finite closed point needs a minimal polynomial")
        minpoly = _coerce_poly(minpoly)
        if minpoly.degree() < 1:
            raise FieldError("minimal polynomial must have positive degree")
        minpoly = monic(minpoly)
        if check:
            _, facs = minpoly.factor()
            if len(facs) != 1 or facs[0][1] != 1:
                raise FieldError(f"{poly_str(minpoly)} is not irreducible over Q")
        self.kind = kind
        self.minpoly = minpoly
        self.degree = minpoly.degree()
        self._key = ("fin", poly_key(minpoly))

    @classmethod
    def finite(cls, minpoly, check: bool = True) -> "ClosedPoint":
        return cls("finite", minpoly, check=check)

    @classmethod
    def infinity(cls) -> "ClosedPoint":
        return INFINITY

    @classmethod
    def parse(cls, text: str) -> "ClosedPoint":
        s = text.strip()
        if s in ("inf", "infinity", "oo"):
            return INFINITY
        f = RationalFunction.parse(s)
        if not f.is_polynomial() or f.deg_num < 1:
            raise FieldError(f"place {text!r} is not a nonconstant polynomial")
        return cls.finite(f.num)

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    def sort_key(self):
        if self.is_infinite:
            return (1, 0, ())
        return (0, self.degree, tuple(Fraction(a, b) for a, b in self._key[1]))

    def __eq__(self, other):
        return isinstance(other, ClosedPoint) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "inf" if self.is_infinite else poly_str(self.minpoly)

    def __repr__(self):
        return f"ClosedPoint({str(self)!r})"


INFINITY = ClosedPoint("infinite")


class PlaceSet:
    """A finite set S of closed points; ``size`` is the geometric count |S|."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[ClosedPoint] = ()):
        self.points = frozenset(points)

    @classmethod
    def parse(cls, text: str) -> "PlaceSet":
        text = text.strip().strip("{}")
        if not text:
            return cls()
        return cls(ClosedPoint.parse(s) for s in text.split(",") if s.strip())

    @classmethod
    def support(cls, *fs: RationalFunction, extra: Iterable[ClosedPoint] = ()) -> "PlaceSet":
        pts = set(extra)
        for f in fs:
            pts.update(places(f))
        return cls(pts)

    @property
    def size(self) -> int:
        return sum(p.degree for p in self.points)

    def finite_points(self) -> list[ClosedPoint]:
        return sorted(p for p in self.points if not p.is_infinite)

    def __contains__(self, p) -> bool:
        return p in self.points

    def __iter__(self) -> Iterator[ClosedPoint]:
        return iter(sorted(self.points))

    def __len__(self):
        return len(self.points)

    def __or__(self, other: "PlaceSet") -> "PlaceSet":
        return PlaceSet(self.points | other.points)

    def __eq__(self, other):
        return isinstance(other, PlaceSet) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __str__(self):
        return ",".join(str(p) for p in self)

    def __repr__(self):
        return f"PlaceSet('{self}')"


@dataclass(frozen=True)
class FieldContext:
    """Genus and separating element.  Only the rational curve is supported."""

    genus: int = 0

    def __post_init__(self):
        if self.genus != 0:
            raise FieldError("only genus 0 (K = k(t)) is implemented")

    @property
    def t(self) -> RationalFunction:
        return T


DEFAULT_FIELD = FieldContext()


# valuations -------------------------------------------------------------------
def valuation(f: RationalFunction, p: ClosedPoint):
    """ord_p(f); ``VAL_INF`` for f = 0."""
    f = RationalFunction.coerce(f)
    if f.is_zero():
        return VAL_INF
    if p.is_infinite:
        return f.deg_den - f.deg_num
    _, a = strip_factor(f.num, p.minpoly)
    if a:
        return a
    _, b = strip_factor(f.den, p.minpoly)
    return -b


def places(f: RationalFunction) -> list[ClosedPoint]:
    """Closed points where f has a zero or a pole (needs factorization)."""
    f = RationalFunction.coerce(f)
    if f.is_zero():
        raise FieldError("the zero element has no divisor")
    pts = []
    for poly in (f.num, f.den):
        if poly.degree() > 0:
            _, facs = poly.factor()
            pts.extend(ClosedPoint.finite(q, check=False) for q, _ in facs)
    if f.deg_num != f.deg_den:
        pts.append(INFINITY)
    return sorted(set(pts))


def divisor(f: RationalFunction) -> dict[ClosedPoint, int]:
    return {p: valuation(f, p) for p in places(f)}


def _nonzero(f, what: str) -> RationalFunction:
    f = RationalFunction.coerce(f)
    if f.is_zero():
        raise FieldError(f"{what} is not defined for 0")
    return f


def height(f: RationalFunction) -> int:
    """Number of poles of f counted with multiplicity."""
    f = _nonzero(f, "height")
    # the denominator is the product of the finite poles, so its degree is
    # the degree-weighted finite pole count
    finite_poles = f.deg_den
    pole_at_inf = max(0, f.deg_num - f.deg_den)
    return finite_poles + pole_at_inf


def projective_height(fs: Sequence[RationalFunction]) -> int:
    """h(f_0 : ... : f_m) = sum over places of -min_i v_p(f_i)."""
    fs = [RationalFunction.coerce(f) for f in fs]
    nz = [f for f in fs if not f.is_zero()]
    if not nz:
        raise FieldError("projective height of the zero tuple")
    pts = set()
    for f in nz:
        pts.update(places(f))
    total = 0
    for p in pts:
        total -= min(valuation(f, p) for f in nz) * p.degree
    return total


def _strip_places(poly: Poly, S: PlaceSet) -> Poly:
    for p in S.finite_points():
        poly, _ = strip_factor(poly, p.minpoly)
    return poly


def counting(f: RationalFunction, S: PlaceSet, mode: str = "N") -> int:
    """N_S(f) (``mode='N'``) or the truncated count (``mode='Nbar'``)."""
    f = _nonzero(f, "counting")
    if mode not in ("N", "Nbar"):
        raise ValueError(f"unknown counting mode {mode!r}")
    rest = _strip_places(f.num, S)
    v_inf = max(0, f.deg_den - f.deg_num) if INFINITY not in S else 0
    if mode == "N":
        return rest.degree() + v_inf
    return squarefree_part(rest).degree() + min(1, v_inf)


def gcd_counting(f: RationalFunction, g: RationalFunction, S: PlaceSet | None = None, mode: str = "N") -> int:
    """N_{S,gcd}(f, g) (``mode='N'``) or h_gcd(f, g) (``mode='h'``)."""
    f = _nonzero(f, "gcd counting")
    g = _nonzero(g, "gcd counting")
    if mode not in ("N", "h"):
        raise ValueError(f"unknown gcd counting mode {mode!r}")
    S = S if (S is not None and mode == "N") else PlaceSet()
    common = f.num.gcd(g.num)
    common = _strip_places(common, S)
    total = common.degree()
    if INFINITY not in S:
        total += min(max(0, f.deg_den - f.deg_num), max(0, g.deg_den - g.deg_num))
    return total


def is_S_unit(f: RationalFunction, S: PlaceSet) -> bool:
    f = _nonzero(f, "S-unit test")
    if _strip_places(f.num, S).degree() > 0 or _strip_places(f.den, S).degree() > 0:
        return False
    return INFINITY in S or f.deg_num == f.deg_den


def is_S_integer(f: RationalFunction, S: PlaceSet) -> bool:
    f = RationalFunction.coerce(f)
    if f.is_zero():
        return True
    if _strip_places(f.den, S).degree() > 0:
        return False
    return INFINITY in S or f.deg_num <= f.deg_den


def is_dth_power(f: RationalFunction, d: int) -> bool:
    """Is f a d-th power in kbar(t)?  True iff d divides every valuation."""
    f = _nonzero(f, "d-th power test")
    if d < 1:
        raise ValueError("d must be positive")
    if d == 1:
        return True
    for poly in (f.num, f.den):
        for _, mult in yun(poly):
            if mult % d:
                return False
    return (f.deg_den - f.deg_num) % d == 0
