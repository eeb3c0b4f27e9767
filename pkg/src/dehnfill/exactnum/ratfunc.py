"""Rational functions in one variable over the rationals."""

from __future__ import annotations

from fractions import Fraction

from .polynomial import Polynomial, parse_polynomial, serialize_polynomial
from .tower import TowerElement


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a root of its denominator."""


class RationalFunction:
    """num/den with gcd(num, den) = 1 and monic den.

    The normal form makes equality syntactic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Polynomial):
            num = Polynomial((num,))
        if den is None:
            den = Polynomial((1,))
        elif not isinstance(den, Polynomial):
            den = Polynomial((den,))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), Polynomial((1,))
            return
        if den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.leading_coefficient()
        if lc != 1:
            num = Polynomial(c / lc for c in num.coeffs)
            den = Polynomial(c / lc for c in den.coeffs)
        self.num, self.den = num, den

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(Polynomial.t())

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        out = RationalFunction.__new__(RationalFunction)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("rational function division by zero")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        return f"RationalFunction({serialize_ratfunc(self)})"


def evaluate(rf: RationalFunction, at):
    """Exact value of rf at a rational or tower point; PoleError at poles."""
    if isinstance(at, int):
        at = Fraction(at)
    if not isinstance(at, (Fraction, TowerElement)):
        raise TypeError(f"cannot evaluate at {at!r}")
    d = rf.den(at)
    if d == 0:
        raise PoleError(f"pole of {rf!r} at {at}")
    value = rf.num(at) / d
    if isinstance(value, TowerElement) and value.is_rational():
        return value.to_fraction()
    return value


def serialize_ratfunc(rf: RationalFunction) -> str:
    return serialize_polynomial(rf.num) + "/" + serialize_polynomial(rf.den)


def parse_ratfunc(text: str) -> RationalFunction:
    text = text.strip()
    if "]/[" in text:
        n, d = text.split("]/[", 1)
        return RationalFunction(parse_polynomial(n + "]"), parse_polynomial("[" + d))
    return RationalFunction(parse_polynomial(text))
