"""Rational enclosures of pi and of cos^2(pi/p) with proven error bounds."""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

from .rational import RationalInterval


def _arctan_inv(n: int, terms: int) -> tuple[Fraction, Fraction]:
    """Enclosure of arctan(1/n) from the alternating Taylor series."""
    x = Fraction(1, n)
    s = Fraction(0)
    power = x
    for k in range(terms):
        s += (-1) ** k * power / (2 * k + 1)
        power *= x * x
    # next omitted term bounds the error; its sign is (-1)^terms
    nxt = power / (2 * terms + 1)
    return (s, s + nxt) if terms % 2 == 0 else (s - nxt, s)


def pi_enclosure(digits: int = 50) -> RationalInterval:
    """pi = 16 arctan(1/5) - 4 arctan(1/239), with rigorous bounds."""
    terms = digits // 2 + 5
    a_lo, a_hi = _arctan_inv(5, terms)
    b_lo, b_hi = _arctan_inv(239, terms)
    return RationalInterval(16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo)


def _cos_enclosure(x: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    """cos(x) for 0 <= x <= 2; the tail is alternating and decreasing."""
    s = Fraction(0)
    term = Fraction(1)
    k = 0
    while abs(term) >= tol:
        s += term
        term = -term * x * x / ((2 * k + 1) * (2 * k + 2))
        k += 1
    # `term` is now the first omitted term
    return (s, s + term) if term > 0 else (s + term, s)


def cos_squared_pi_over(p: int, digits: int = 40) -> RationalInterval:
    """Certified enclosure of cos^2(pi/p) for p >= 2."""
    if p < 2:
        raise ValueError("p must be at least 2")
    pi = pi_enclosure(digits + 10)
    scale = 10 ** (digits + 10)
    # outward rounding keeps the denominators short
    x_lo = Fraction(floor(pi.lo * scale / p), scale)
    x_hi = Fraction(ceil(pi.hi * scale / p), scale)
    tol = Fraction(1, 10 ** (digits + 5))
    # cos is decreasing and positive on [0, pi/2]
    c_lo = _cos_enclosure(x_hi, tol)[0]
    c_hi = _cos_enclosure(x_lo, tol)[1]
    c_lo = max(_round_down(c_lo, scale), Fraction(0))
    c_hi = min(_round_up(c_hi, scale), Fraction(1))
    return RationalInterval(_round_down(c_lo * c_lo, scale), _round_up(c_hi * c_hi, scale))


def _round_down(x: Fraction, scale: int) -> Fraction:
    return Fraction(floor(x * scale), scale)


def _round_up(x: Fraction, scale: int) -> Fraction:
    return Fraction(ceil(x * scale), scale)
