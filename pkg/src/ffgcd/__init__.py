"""Exact arithmetic and gcd-height verification over the function field Q(t)."""

from .ffcore import (
    INFINITY,
    ONE,
    T,
    ZERO,
    ClosedPoint,
    FieldContext,
    FieldError,
    PlaceSet,
    RationalFunction,
    counting,
    divisor,
    gcd_counting,
    height,
    is_dth_power,
    is_S_integer,
    is_S_unit,
    places,
    projective_height,
    valuation,
)
from .mvpoly import MvPoly
from .parsing import ParseError

__version__ = "0.1.0"
