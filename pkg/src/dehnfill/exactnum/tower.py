"""The quadratic tower Q(sqrt2)(sqrtD), D = 31 + 22*sqrt2.

Elements are stored as four rationals (a, b, c, d) meaning

    a + b*sqrt2 + c*sqrtD + d*sqrt2*sqrtD

with both square roots taken positive. D is not a square in Q(sqrt2)
(its norm 31^2 - 2*22^2 = -7 is negative), so this is a degree-4 field
and every nonzero element is invertible.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .rational import RationalInterval, as_fraction, format_rational

_ZERO = Fraction(0)

# D as an element a + b*sqrt2 of the first level
D_RADICAND = (Fraction(31), Fraction(22))


# -- first level: pairs (a, b) = a + b*sqrt2 ---------------------------------

def _q2_add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def _q2_sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def _q2_mul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _q2_inv(x):
    n = x[0] * x[0] - 2 * x[1] * x[1]
    if n == 0:
        raise ZeroDivisionError("division by zero in Q(sqrt2)")
    return (x[0] / n, -x[1] / n)


def _q2_sign(x) -> int:
    a, b = x
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with 2 b^2
    diff = a * a - 2 * b * b
    return sa * ((diff > 0) - (diff < 0))


def _q2_is_zero(x) -> bool:
    return x[0] == 0 and x[1] == 0


class TowerElement:
    """Exact element of Q(sqrt2, sqrt(31 + 22 sqrt2))."""

    __slots__ = ("_x", "_y")

    def __init__(self, a=0, b=0, c=0, d=0):
        self._x = (as_fraction(a), as_fraction(b))
        self._y = (as_fraction(c), as_fraction(d))

    @classmethod
    def _from_levels(cls, x, y) -> "TowerElement":
        obj = cls.__new__(cls)
        obj._x = x
        obj._y = y
        return obj

    @classmethod
    def sqrt2(cls) -> "TowerElement":
        return cls(0, 1, 0, 0)

    @classmethod
    def sqrtD(cls) -> "TowerElement":
        return cls(0, 0, 1, 0)

    @property
    def coordinates(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Coefficients in the basis (1, sqrt2, sqrtD, sqrt2*sqrtD)."""
        return (self._x[0], self._x[1], self._y[0], self._y[1])

    @property
    def level(self) -> int:
        """0 if rational, 1 if in Q(sqrt2), 2 otherwise."""
        if not _q2_is_zero(self._y):
            return 2
        if self._x[1] != 0:
            return 1
        return 0

    def is_rational(self) -> bool:
        return self.level == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._x[0]

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, TowerElement):
            return other
        if isinstance(other, (int, Fraction)):
            return TowerElement(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TowerElement._from_levels(_q2_add(self._x, o._x), _q2_add(self._y, o._y))

    __radd__ = __add__

    def __neg__(self):
        return TowerElement._from_levels((-self._x[0], -self._x[1]), (-self._y[0], -self._y[1]))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TowerElement._from_levels(_q2_sub(self._x, o._x), _q2_sub(self._y, o._y))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerElement._from_levels(
                (self._x[0] * other, self._x[1] * other),
                (self._y[0] * other, self._y[1] * other),
            )
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        x1, y1, x2, y2 = self._x, self._y, o._x, o._y
        x = _q2_add(_q2_mul(x1, x2), _q2_mul(D_RADICAND, _q2_mul(y1, y2)))
        y = _q2_add(_q2_mul(x1, y2), _q2_mul(y1, x2))
        return TowerElement._from_levels(x, y)

    __rmul__ = __mul__

    def inverse(self) -> "TowerElement":
        # (x + y sqrtD)^-1 = (x - y sqrtD) / (x^2 - D y^2)
        x, y = self._x, self._y
        n = _q2_sub(_q2_mul(x, x), _q2_mul(D_RADICAND, _q2_mul(y, y)))
        if _q2_is_zero(n):
            raise ZeroDivisionError("division by zero in the tower")
        ninv = _q2_inv(n)
        return TowerElement._from_levels(_q2_mul(x, ninv), _q2_mul((-y[0], -y[1]), ninv))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in the tower")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = TowerElement(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._x == o._x and self._y == o._y

    def __hash__(self):
        if self.is_rational():
            return hash(self._x[0])
        return hash((self._x, self._y))

    def __bool__(self):
        return not (_q2_is_zero(self._x) and _q2_is_zero(self._y))

    def __lt__(self, other):
        return tower_sign(self - other) < 0

    def __le__(self, other):
        return tower_sign(self - other) <= 0

    def __gt__(self, other):
        return tower_sign(self - other) > 0

    def __ge__(self, other):
        return tower_sign(self - other) >= 0

    def __float__(self):
        iv = enclose(self, Fraction(1, 10**18))
        return float(iv.midpoint)

    def __repr__(self):
        return "TowerElement(" + ", ".join(format_rational(c) for c in self.coordinates) + ")"

    def __str__(self):
        return serialize_tower(self)


def tower_sign(x) -> int:
    """Exact sign (-1, 0, 1) of a tower element under the real embedding.

    x = X + Y*sqrtD with X, Y in Q(sqrt2). When X and Y have opposite signs
    the sign is decided by squaring: sign(X) * sign(X^2 - D*Y^2).
    """
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    X, Y = x._x, x._y
    sX = _q2_sign(X)
    sY = _q2_sign(Y)
    if sY == 0:
        return sX
    if sX == 0 or sX == sY:
        return sY
    diff = _q2_sub(_q2_mul(X, X), _q2_mul(D_RADICAND, _q2_mul(Y, Y)))
    return sX * _q2_sign(diff)


def _crude_bound(x: TowerElement) -> Fraction:
    # sqrt2 < 3/2, sqrtD < 8, sqrt2*sqrtD < 12
    a, b, c, d = x.coordinates
    return abs(a) + abs(b) * Fraction(3, 2) + abs(c) * 8 + abs(d) * 12 + 1


def _float_guess(x: TowerElement) -> float:
    a, b, c, d = (float(v) for v in x.coordinates)
    r2 = 2.0 ** 0.5
    rD = (31.0 + 22.0 * r2) ** 0.5
    return a + b * r2 + c * rD + d * r2 * rD


def enclose(x, width) -> RationalInterval:
    """Rational lo < x < hi with hi - lo <= width, by bisection on exact signs."""
    width = as_fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return RationalInterval(x - width / 4, x + width / 4)
    if x.is_rational():
        v = x.to_fraction()
        return RationalInterval(v - width / 4, v + width / 4)
    bound = _crude_bound(x)
    lo, hi = -bound, bound
    try:
        g = Fraction(_float_guess(x)).limit_denominator(10**12)
        glo, ghi = g - Fraction(1, 10**6), g + Fraction(1, 10**6)
        if tower_sign(x - glo) > 0 and tower_sign(x - ghi) < 0:
            lo, hi = glo, ghi
    except (OverflowError, ValueError):
        pass
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = tower_sign(x - mid)
        if s == 0:  # pragma: no cover - x irrational here
            return RationalInterval(mid - width / 4, mid + width / 4)
        if s > 0:
            lo = mid
        else:
            hi = mid
    return RationalInterval(lo, hi)


def sqrt_fraction(q: Fraction) -> Fraction | None:
    """Exact rational square root, or None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def serialize_tower(x: TowerElement) -> str:
    return "(" + ",".join(format_rational(c) for c in x.coordinates) + ")"


def parse_tower(text: str) -> TowerElement:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"tower element must be written (a,b,c,d), got {text!r}")
    parts = [p for p in text[1:-1].split(",")]
    if len(parts) != 4:
        raise ValueError(f"tower element needs 4 coordinates, got {len(parts)}")
    from .rational import parse_rational

    return TowerElement(*(parse_rational(p) for p in parts))
