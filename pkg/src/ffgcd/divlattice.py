"""Exponent vectors over a gcd-free basis and multiplicative relations.

A coprime basis lets every S-unit be written as c * prod b_j^{e_j} without
factoring into irreducibles.  Relations prod g_i^{m_i} in k* are exactly
the integer left kernel of the exponent matrix; the kernel comes from
row-reducing [E | I] over Z and short relations are found by enumerating
kernel combinations inside a box that provably contains every vector of
the requested l1 norm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .ffcore import (
    ONE,
    FieldError,
    PlaceSet,
    Poly,
    RationalFunction,
    is_S_unit,
    monic,
    poly_key,
    poly_str,
    strip_factor,
    to_fraction,
    yun,
)


class UnsupportedFactorError(FieldError):
    """The element has a factor outside the coprime basis."""

    def __init__(self, residual: Poly):
        self.residual = residual
        super().__init__(f"factor {poly_str(residual)} is not supported on the basis")


@dataclass(frozen=True)
class CoprimeBasis:
    elements: tuple
    source: tuple = ()

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self):
        return "{" + ", ".join(poly_str(b) for b in self.elements) + "}"


def _basis_sort_key(p: Poly):
    return (p.degree(), tuple(Fraction(a, b) for a, b in poly_key(p)))


def _refine(polys: list[Poly]) -> list[Poly]:
    work = []
    seen = set()
    for p in polys:
        if p.degree() > 0:
            p = monic(p)
            k = poly_key(p)
            if k not in seen:
                seen.add(k)
                work.append(p)
    changed = True
    while changed:
        changed = False
        for a_idx in range(len(work)):
            for b_idx in range(a_idx + 1, len(work)):
                a, b = work[a_idx], work[b_idx]
                g = a.gcd(b)
                if g.degree() > 0:
                    rest = [p for k, p in enumerate(work) if k not in (a_idx, b_idx)]
                    new = rest + [g, a / g, b / g]
                    work = []
                    seen = set()
                    for p in new:
                        if p.degree() > 0:
                            p = monic(p)
                            k = poly_key(p)
                            if k not in seen:
                                seen.add(k)
                                work.append(p)
                    changed = True
                    break
            if changed:
                break
    return sorted(work, key=_basis_sort_key)


def refine_coprime_basis(fs: Iterable) -> CoprimeBasis:
    """Pairwise coprime monic polynomials generating every input up to k*."""
    fs = [RationalFunction.coerce(f) for f in fs]
    polys = []
    for f in fs:
        if f.is_zero():
            raise FieldError("cannot refine a basis containing 0")
        for part in (f.num, f.den):
            if part.degree() > 0:
                polys.extend(a for a, _ in yun(part))
    return CoprimeBasis(tuple(_refine(polys)), tuple(fs))


@dataclass(frozen=True)
class ExponentVector:
    exponents: tuple
    v_inf: int
    constant: Fraction

    @property
    def vector(self) -> tuple:
        return self.exponents + (self.v_inf,)


def exponent_vector(f, basis: CoprimeBasis) -> ExponentVector:
    """f = c * prod b_j^{e_j}; raises UnsupportedFactorError otherwise."""
    f = RationalFunction.coerce(f)
    if f.is_zero():
        raise FieldError("exponent vector of 0")
    num, den = f.num, f.den
    exps = []
    for b in basis.elements:
        num, a = strip_factor(num, b)
        den, c = strip_factor(den, b)
        exps.append(a - c)
    for rest in (num, den):
        if rest.degree() > 0:
            raise UnsupportedFactorError(monic(rest))
    const = to_fraction(num.coeffs()[0]) / to_fraction(den.coeffs()[0])
    return ExponentVector(tuple(exps), f.deg_den - f.deg_num, const)


class UnitTuple:
    """(g_1, ..., g_n) with cached exponent vectors on a shared coprime basis."""

    __slots__ = ("entries", "S", "basis", "vectors")

    def __init__(self, entries: Sequence, S: PlaceSet | None = None, basis: CoprimeBasis | None = None):
        self.entries = tuple(RationalFunction.coerce(e) for e in entries)
        if any(e.is_zero() for e in self.entries):
            raise FieldError("unit tuple entries must be nonzero")
        self.S = S
        if S is not None:
            for e in self.entries:
                if not is_S_unit(e, S):
                    raise FieldError(f"{e} is not an S-unit for S = {{{S}}}")
        self.basis = basis if basis is not None else refine_coprime_basis(self.entries)
        self.vectors = tuple(exponent_vector(e, self.basis) for e in self.entries)

    @classmethod
    def parse(cls, texts: Sequence[str], S: PlaceSet | None = None) -> "UnitTuple":
        return cls([RationalFunction.parse(s) for s in texts], S)

    @property
    def exponent_matrix(self) -> list[list[int]]:
        return [list(v.vector) for v in self.vectors]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def power_product(self, m: Sequence[int]) -> RationalFunction:
        out = ONE
        for g, e in zip(self.entries, m):
            if e:
                out = out * g**e
        return out

    def power_height(self, m: Sequence[int]) -> int:
        """h(prod g_i^{m_i}) from exponent vectors alone."""
        k = len(self.basis)
        total = 0
        for j in range(k + 1):
            v = sum(mi * vec.vector[j] for mi, vec in zip(m, self.vectors))
            if v < 0:
                total -= v * (self.basis.elements[j].degree() if j < k else 1)
        return total

    def support(self) -> PlaceSet:
        return PlaceSet.support(*self.entries)

    def __repr__(self):
        return f"UnitTuple({[str(e) for e in self.entries]})"


@dataclass(frozen=True)
class MultiplicativeRelation:
    exponents: tuple
    witness: Fraction
    l1_norm: int = field(init=False)

    def __post_init__(self):
        if not any(self.exponents):
            raise ValueError("a relation needs a nonzero exponent vector")
        object.__setattr__(self, "l1_norm", sum(abs(m) for m in self.exponents))


def integer_row_echelon(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Unimodular U with U E in row echelon form.

    Returns (U E, U, rank); the first ``rank`` rows of U E are a Z-basis of
    the row lattice (pivots made positive) and the remaining rows of U are
    a basis of the integer left kernel.
    """
    n = len(rows)
    if n == 0:
        return [], [], 0
    k = len(rows[0])
    aug = [list(map(int, r)) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    top = 0
    for c in range(k):
        while True:
            nz = [i for i in range(top, n) if aug[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(aug[i][c]))
            aug[top], aug[piv] = aug[piv], aug[top]
            done = True
            for i in range(top + 1, n):
                if aug[i][c]:
                    q = aug[i][c] // aug[top][c]
                    aug[i] = [x - q * y for x, y in zip(aug[i], aug[top])]
                    if aug[i][c]:
                        done = False
            if done:
                if aug[top][c] < 0:
                    aug[top] = [-x for x in aug[top]]
                top += 1
                break
        if top == n:
            break
    return [row[:k] for row in aug], [row[k:] for row in aug], top


def integer_left_kernel(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {m in Z^n : m E = 0} by unimodular row reduction of [E | I]."""
    _, U, rank = integer_row_echelon(rows)
    return U[rank:]


def _normalize_sign(m: tuple) -> tuple:
    for x in m:
        if x:
            return m if x > 0 else tuple(-y for y in m)
    return m


def _coefficient_box(kernel: list[list[int]], l1_bound: int) -> list[int]:
    """Per-coordinate bound on kernel combinations with l1 norm <= l1_bound."""
    r = len(kernel)
    n = len(kernel[0])
    for cols in itertools.combinations(range(n), r):
        sub = flint.fmpq_mat([[kernel[i][j] for j in cols] for i in range(r)])
        if sub.rank() == r:
            inv = sub.inv()
            # c = m_J * inv, so |c_k| <= l1 * max_j |inv[j][k]|
            box = []
            for kk in range(r):
                mx = max(abs(to_fraction(inv[j, kk])) for j in range(r))
                box.append(int(mx * l1_bound))
            return box
    raise AssertionError("kernel basis has dependent rows")


def find_relation(g: UnitTuple, l1_bound: int) -> MultiplicativeRelation | None:
    """A nonzero m with prod g_i^{m_i} in k* and sum |m_i| <= l1_bound, or None.

    Returns the relation of least l1 norm; ties are broken by the
    lexicographically largest sign-normalized vector.
    """
    if not isinstance(g, UnitTuple):
        g = UnitTuple(g)
    if l1_bound < 1:
        return None
    kernel = integer_left_kernel(g.exponent_matrix)
    if not kernel:
        return None
    box = _coefficient_box(kernel, l1_bound)
    n = len(g)
    best = None
    for c in itertools.product(*(range(-b, b + 1) for b in box)):
        if not any(c):
            continue
        m = tuple(sum(ci * kernel[i][j] for i, ci in enumerate(c)) for j in range(n))
        l1 = sum(abs(x) for x in m)
        if l1 == 0 or l1 > l1_bound:
            continue
        m = _normalize_sign(m)
        key = (l1, tuple(-x for x in m))
        if best is None or key < best[0]:
            best = (key, m)
    if best is None:
        return None
    m = best[1]
    w = g.power_product(m)
    if not w.is_constant():
        raise AssertionError(f"kernel vector {m} does not give a constant")
    return MultiplicativeRelation(m, w.constant_value())


def is_multiplicatively_independent_mod_k(g) -> bool:
    if not isinstance(g, UnitTuple):
        g = UnitTuple(g)
    return flint.fmpz_mat(g.exponent_matrix).rank() == len(g)


def l1_vectors(n: int, bound: int) -> Iterable[tuple]:
    """All nonzero integer vectors of length n with l1 norm <= bound."""
    for m in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(m) and sum(abs(x) for x in m) <= bound:
            yield m


def min_relation_height(g: UnitTuple, l1_bound: int) -> tuple[int, tuple] | None:
    """Least h(g^m) over nonzero m with sum |m_i| <= l1_bound, with a minimizer."""
    best = None
    for m in l1_vectors(len(g), l1_bound):
        m = _normalize_sign(m)
        h = g.power_height(m)
        key = (h, sum(abs(x) for x in m), tuple(-x for x in m))
        if best is None or key < best[0]:
            best = (key, m)
    if best is None:
        return None
    return best[0][0], best[1]


__all__ = [
    "CoprimeBasis",
    "ExponentVector",
    "MultiplicativeRelation",
    "UnitTuple",
    "UnsupportedFactorError",
    "exponent_vector",
    "find_relation",
    "integer_left_kernel",
    "integer_row_echelon",
    "is_multiplicatively_independent_mod_k",
    "l1_vectors",
    "min_relation_height",
    "refine_coprime_basis",
]
