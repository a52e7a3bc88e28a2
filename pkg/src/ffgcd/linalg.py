"""Exact linear algebra over K = Q(t) and over Q.

Matrices over K are lists of rows of ``RationalFunction``; elimination is
plain Gauss-Jordan with exact arithmetic.  Q-linear questions about
elements of K (the spaces V(r)) reduce to ranks of integer matrices after
clearing denominators; large ranks are first tried modulo a word-size prime
and fall back to exact ``fmpz_mat`` rank when the modular rank is short.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import flint

from .ffcore import ONE, ZERO, FieldError, Poly, RationalFunction

Matrix = list[list[RationalFunction]]

_PRIME = 2305843009213693951  # 2^61 - 1


class SingularMatrixError(FieldError):
    pass


def _copy(rows: Sequence[Sequence]) -> Matrix:
    return [[RationalFunction.coerce(x) for x in row] for row in rows]


def k_rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over K; returns (nonzero rows, pivot columns)."""
    a = _copy(rows)
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        best = None
        for i in range(r, len(a)):
            x = a[i][c]
            if not x.is_zero():
                # prefer the simplest pivot to keep intermediate growth down
                size = x.deg_num + x.deg_den
                if best is None or size < best:
                    piv, best = i, size
                    if size == 0:
                        break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv if not x.is_zero() else x for x in a[r]]
        for i in range(len(a)):
            if i != r:
                f = a[i][c]
                if not f.is_zero():
                    a[i] = [x - f * y if not y.is_zero() else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def k_rank(rows: Sequence[Sequence]) -> int:
    return len(k_rref(rows)[1])


def k_det(rows: Sequence[Sequence]) -> RationalFunction:
    a = _copy(rows)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det = det * p
        inv = p.inverse()
        for i in range(c + 1, n):
            f = a[i][c]
            if not f.is_zero():
                f = f * inv
                a[i] = [x - f * y if not y.is_zero() else x for x, y in zip(a[i], a[c])]
    return det


def k_inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(_copy(rows))]
    red, piv = k_rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrixError("matrix is singular over K")
    return [row[n:] for row in red]


def k_matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            s = ZERO
            for x, y in zip(row, col):
                if not x.is_zero() and not y.is_zero():
                    s = s + x * y
            out_row.append(s)
        out.append(out_row)
    return out


def k_solve_row(basis_rref: Matrix, pivots: list[int], vec: Sequence) -> list[RationalFunction] | None:
    """Coefficients c with c * basis == vec for an RREF basis, or None."""
    vec = [RationalFunction.coerce(x) for x in vec]
    coeffs = [vec[c] for c in pivots]
    rest = list(vec)
    for k, row in zip(coeffs, basis_rref):
        if not k.is_zero():
            rest = [x - k * y if not y.is_zero() else x for x, y in zip(rest, row)]
    if any(not x.is_zero() for x in rest):
        return None
    return coeffs


# Q-linear structure of elements of K ----------------------------------------
def _lcm(a: Poly, b: Poly) -> Poly:
    g = a.gcd(b)
    return (a * b) / g


def common_denominator(elements: Iterable[RationalFunction]) -> Poly:
    den = Poly([1])
    for f in elements:
        if f.deg_den > 0:
            den = _lcm(den, f.den)
    return den


def cleared_polys(elements: Sequence[RationalFunction]) -> list[Poly]:
    """Multiply every element by one common denominator (a Q-linear iso)."""
    elements = [RationalFunction.coerce(f) for f in elements]
    den = common_denominator(elements)
    return [f.num * (den / f.den) for f in elements]


def _int_rows(polys: Sequence[Poly], width: int) -> list[list[int]]:
    rows = []
    for p in polys:
        q = p.numer()
        cs = [int(c) for c in q.coeffs()]
        rows.append(cs + [0] * (width - len(cs)))
    return rows


def q_rank_polys(polys: Sequence[Poly]) -> int:
    """Rank over Q of a list of polynomials in t."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return 0
    width = max(p.degree() for p in polys) + 1
    rows = _int_rows(polys, width)
    full = min(len(rows), width)
    mod = flint.nmod_mat(rows, _PRIME)
    r = mod.rank()
    if r == full:
        return r
    return flint.fmpz_mat(rows).rank()


def q_rank(elements: Sequence[RationalFunction]) -> int:
    """Dimension over Q (equivalently over the algebraic closure) of the span."""
    nz = [RationalFunction.coerce(f) for f in elements]
    nz = [f for f in nz if not f.is_zero()]
    if not nz:
        return 0
    return q_rank_polys(cleared_polys(nz))


def q_independent(elements: Sequence[RationalFunction]) -> bool:
    elements = [RationalFunction.coerce(f) for f in elements]
    if any(f.is_zero() for f in elements):
        return False
    polys = cleared_polys(elements)
    width = max(p.degree() for p in polys) + 1
    if len(polys) > width:
        return False
    return q_rank_polys(polys) == len(polys)


class PolySpan:
    """Incrementally maintained Q-basis of a space of polynomials.

    Stored in echelon form keyed by leading degree, every basis element
    monic; membership and insertion reduce by the pivots top-down.
    """

    def __init__(self, polys: Iterable[Poly] = ()):
        self.pivots: dict[int, Poly] = {}
        for p in polys:
            self.add(p)

    def _reduce_lead(self, p: Poly) -> Poly:
        while not p.is_zero():
            b = self.pivots.get(p.degree())
            if b is None:
                return p
            p = p - b * p.leading_coefficient()
        return p

    def add(self, p: Poly) -> bool:
        r = self._reduce_lead(p)
        if r.is_zero():
            return False
        self.pivots[r.degree()] = r / r.leading_coefficient()
        return True

    def contains(self, p: Poly) -> bool:
        return self._reduce_lead(p).is_zero()

    def basis(self) -> list[Poly]:
        return [self.pivots[d] for d in sorted(self.pivots)]

    def __len__(self):
        return len(self.pivots)
