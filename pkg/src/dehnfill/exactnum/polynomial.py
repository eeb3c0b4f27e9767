"""Dense univariate polynomials with exact coefficients.

Coefficients are stored low-to-high. They are normally rationals; tower
elements are allowed so that characteristic polynomials of matrices over
the tower can be represented, but root counting requires rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd

from .rational import as_fraction, format_rational, parse_rational
from .tower import TowerElement


def _coerce_coeff(c):
    if isinstance(c, TowerElement):
        return c.to_fraction() if c.is_rational() else c
    return as_fraction(c)


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_coerce_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    # -- structure --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return Polynomial(c / lc for c in self.coeffs)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction, TowerElement)):
            return Polynomial((other,))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

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
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Polynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Polynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dl = o.degree
        lc = o.coeffs[-1]
        if len(rem) - 1 < dl:
            return Polynomial(), Polynomial(rem)
        quo = [Fraction(0)] * (len(rem) - dl)
        for k in range(len(rem) - 1 - dl, -1, -1):
            q = rem[k + dl] / lc
            quo[k] = q
            if q != 0:
                for j, c in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - q * c
        return Polynomial(quo), Polynomial(rem[:dl])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    # -- evaluation & calculus -------------------------------------------

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if isinstance(acc, int):
            return Fraction(acc)
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def compose(self, other: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    # -- gcd --------------------------------------------------------------

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd (zero if both are zero)."""
        a, b = self, other
        if a.is_zero():
            return b.monic()
        if b.is_zero():
            return a.monic()
        if a.is_rational() and b.is_rational():
            return _primitive_gcd(a, b).monic()
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self) -> "Polynomial":
        if self.degree < 1:
            return self
        g = self.gcd(self.derivative())
        return self.exact_div(g)

    # -- misc -------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Polynomial({serialize_polynomial(self)})"

    def pretty(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = str(c) if isinstance(c, TowerElement) else format_rational(c)
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")


def _integer_content_and_prim(p: Polynomial):
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _igcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = _igcd(g, v)
    return [v // g for v in ints]


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists (low-to-high)."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        lead = a[-1]
        a = [v * lc for v in a]
        for j, c in enumerate(b):
            a[k + j] -= lead * c
        while a and a[-1] == 0:
            a.pop()
    return a


def _prim(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = _igcd(g, x)
    if g == 0:
        return v
    v = [x // g for x in v]
    if v[-1] < 0:
        v = [-x for x in v]
    return v


def _primitive_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    a = _integer_content_and_prim(p)
    b = _integer_content_and_prim(q)
    if len(a) < len(b):
        a, b = b, a
    a, b = _prim(a), _prim(b)
    while b:
        r = _int_prem(a, b)
        a, b = b, _prim(r) if r else []
    return Polynomial(a)


def serialize_polynomial(p: Polynomial) -> str:
    parts = []
    for c in p.coeffs:
        parts.append(str(c) if isinstance(c, TowerElement) else format_rational(c))
    return "[" + ",".join(parts) + "]"


def parse_polynomial(text: str) -> Polynomial:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"polynomial must be a coefficient array [c0,c1,...], got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return Polynomial()
    return Polynomial(parse_rational(tok) for tok in body.split(","))
