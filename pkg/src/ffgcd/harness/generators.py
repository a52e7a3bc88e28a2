"""Seeded random instance generators.

Each generator takes a ``random.Random`` and a parameter dict and returns
a JSON-ready instance: elements of K as strings in the element grammar,
polynomials as strings in x1..xn, place sets as comma lists.  Degenerate
draws are resampled up to ``RETRIES`` times.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from ..ffcore import INFINITY, ONE, PlaceSet, RationalFunction, T
from ..mvpoly import MvPoly, is_coprime

RETRIES = 200

#: irreducible place polynomials used to build S-units
PLACES = ["t", "t+1", "t-1", "t-2", "t+2", "t^2+1", "t^2-2", "t^2+t+1"]
#: irreducible factors of degree <= 4 for the d-th power oracle
IRREDUCIBLES = ["t", "t+1", "t-3", "2*t+1", "t^2+1", "t^2-2", "t^2+t+1", "t^3-2", "t^3+t+1",
                "t^4+1", "t^4-t-1", "t^4+2*t^2-2"]


class GenerationError(RuntimeError):
    pass


def retry(fn: Callable[[], object]):
    for _ in range(RETRIES):
        out = fn()
        if out is not None:
            return out
    raise GenerationError(f"no admissible draw after {RETRIES} tries")


def rand_q(rng: random.Random, box: int = 3, nonzero: bool = True) -> Fraction:
    while True:
        q = Fraction(rng.randint(-box, box), rng.randint(1, 2))
        if q or not nonzero:
            return q


def rand_tpoly(rng: random.Random, deg: int, box: int = 3) -> RationalFunction:
    """Nonzero polynomial in t of degree <= deg."""
    while True:
        out = RationalFunction(0)
        for e in range(deg + 1):
            c = rng.randint(-box, box)
            if c:
                out = out + T**e * c
        if not out.is_zero():
            return out


def rand_rf(rng: random.Random, deg: int, box: int = 3) -> RationalFunction:
    return rand_tpoly(rng, deg, box) / rand_tpoly(rng, rng.randint(0, deg), box)


def place(text: str) -> RationalFunction:
    return RationalFunction.parse(text)


def rand_unit(rng: random.Random, places: list[str], emax: int = 3, constant: bool = True) -> RationalFunction:
    """c * prod p^e over the given places, not constant."""
    while True:
        out = RationalFunction.constant(rand_q(rng)) if constant else ONE
        for p in places:
            e = rng.randint(-emax, emax)
            if e:
                out = out * place(p) ** e
        if not out.is_constant():
            return out


def rand_mvpoly(rng: random.Random, n: int, deg: int, coeff: Callable[[], RationalFunction],
                terms: int = 3, exact_degree: bool = True) -> MvPoly:
    while True:
        F = MvPoly.zero(n)
        for _ in range(terms):
            k = rng.randint(0, deg)
            mono = [0] * n
            for _ in range(k):
                mono[rng.randrange(n)] += 1
            F = F + MvPoly.monomial(tuple(mono), coeff())
        if F.is_zero() or F.is_constant():
            continue
        if exact_degree and F.total_degree() != deg:
            continue
        return F


def with_unit_coefficient(F: MvPoly) -> MvPoly:
    """Scale F so that its grlex-leading coefficient is 1."""
    return F.monic()


def const_coeff(rng: random.Random, box: int = 3) -> Callable[[], RationalFunction]:
    return lambda: RationalFunction.constant(rand_q(rng, box))


def poly_coeff(rng: random.Random, deg: int = 1, box: int = 3) -> Callable[[], RationalFunction]:
    return lambda: rand_tpoly(rng, deg, box)


def places_str(S: PlaceSet) -> str:
    return str(S)


def support_with_inf(*fs) -> PlaceSet:
    return PlaceSet.support(*fs, extra=[INFINITY])


def coprime_pair(rng: random.Random, n: int, d: int, coeff, terms: int = 3, unit_coefficient: bool = True):
    def draw():
        F = rand_mvpoly(rng, n, d, coeff, terms)
        G = rand_mvpoly(rng, n, d, coeff, terms)
        if unit_coefficient:
            F, G = with_unit_coefficient(F), with_unit_coefficient(G)
        if F == G or not is_coprime(F, G):
            return None
        return F, G

    return retry(draw)


__all__ = [
    "GenerationError",
    "IRREDUCIBLES",
    "PLACES",
    "RETRIES",
    "const_coeff",
    "coprime_pair",
    "place",
    "places_str",
    "poly_coeff",
    "rand_mvpoly",
    "rand_q",
    "rand_rf",
    "rand_tpoly",
    "rand_unit",
    "retry",
    "support_with_inf",
    "with_unit_coefficient",
]
