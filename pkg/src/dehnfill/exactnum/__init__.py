"""Exact arithmetic: rationals, polynomials, rational functions, the sqrt2/sqrtD tower."""

from fractions import Fraction

from .certified import cos_squared_pi_over, pi_enclosure
from .polynomial import Polynomial, parse_polynomial, serialize_polynomial
from .ratfunc import PoleError, RationalFunction, evaluate, parse_ratfunc, serialize_ratfunc
from .rational import Rational, RationalInterval, as_fraction, format_rational, parse_rational
from .sturm import (
    EndpointRootError,
    PositivityCertificate,
    UndecidedError,
    poly_positive_on,
    sign_on_halfopen,
    sturm_root_count,
)
from .tower import TowerElement, enclose, parse_tower, serialize_tower, tower_sign

# Any exact number the library passes around.
ExactScalar = Fraction | TowerElement | RationalFunction


def to_text(x) -> str:
    """Text serialization of any exact scalar."""
    if isinstance(x, TowerElement):
        return x.to_fraction().__str__() if x.is_rational() else serialize_tower(x)
    if isinstance(x, RationalFunction):
        return serialize_ratfunc(x)
    return format_rational(x)


def from_text(text: str):
    text = text.strip()
    if text.startswith("("):
        return parse_tower(text)
    if text.startswith("["):
        return parse_ratfunc(text)
    return parse_rational(text)


def display(x, digits: int = 12) -> str:
    """Display-only decimal rendering."""
    if isinstance(x, TowerElement):
        x = enclose(x, Fraction(1, 10 ** (digits + 4))).midpoint
    return f"{float(x):.{digits}g}"
