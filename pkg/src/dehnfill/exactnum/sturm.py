"""Sturm root counting and certified positivity on intervals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polynomial import Polynomial
from .rational import RationalInterval, as_fraction, format_rational
from .tower import TowerElement, enclose, tower_sign

DEFAULT_BUDGET = 64


class EndpointRootError(ValueError):
    """A window endpoint is a root; perturb it rationally and retry."""


class UndecidedError(RuntimeError):
    """Refinement budget exhausted without a certified answer."""


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        # scale by a positive constant to keep coefficients small
        lc = abs(r.leading_coefficient())
        seq.append(-Polynomial(c / lc for c in r.coeffs))
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_changes(seq: list[Polynomial], x: Fraction) -> int:
    signs = [s for s in (_sign(q(x)) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_root_count(p: Polynomial, window) -> int:
    """Number of distinct real roots of p in the open window (lo, hi)."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if not p.is_rational():
        raise TypeError("Sturm counting needs rational coefficients")
    lo, hi = (as_fraction(v) for v in window)
    if lo > hi:
        raise ValueError("empty window")
    for e in (lo, hi):
        if p(e) == 0:
            raise EndpointRootError(f"endpoint {format_rational(e)} is a root")
    if p.degree < 1 or lo == hi:
        return 0
    q = p.squarefree_part()
    seq = sturm_sequence(q)
    return sign_changes(seq, lo) - sign_changes(seq, hi)


def exact_sign_at(p: Polynomial, x) -> int:
    v = p(x)
    if isinstance(v, TowerElement):
        return tower_sign(v)
    return _sign(v)


@dataclass(frozen=True)
class PositivityCertificate:
    """Outcome of poly_positive_on; truthy iff p > 0 on the whole interval."""

    holds: bool
    polynomial: Polynomial
    lo: object
    hi: Fraction
    sign_lo: int
    sign_hi: int
    window: RationalInterval | None = None
    root_count: int | None = None
    refinements: int = 0
    reason: str = ""

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out = {
            "holds": self.holds,
            "polynomial": [format_rational(c) for c in self.polynomial.coeffs],
            "lo": str(self.lo) if isinstance(self.lo, TowerElement) else format_rational(self.lo),
            "hi": format_rational(self.hi),
            "sign_lo": self.sign_lo,
            "sign_hi": self.sign_hi,
            "refinements": self.refinements,
            "reason": self.reason,
        }
        if self.window is not None:
            out["sturm_window"] = self.window.to_json()
            out["sturm_root_count"] = self.root_count
        return out


def poly_positive_on(p: Polynomial, lo, hi, budget: int = DEFAULT_BUDGET) -> PositivityCertificate:
    """Decide p(x) > 0 for every x in [lo, hi]; lo may be a tower element.

    Exact signs at both ends, then a Sturm count on a rational window
    (l0, hi) with l0 < lo. When that window catches roots the lower
    enclosure of lo is refined; a root found in (l1, hi) with l1 > lo is
    a certified counterexample.
    """
    hi = as_fraction(hi)
    if isinstance(lo, TowerElement) and lo.is_rational():
        lo = lo.to_fraction()
    if not isinstance(lo, TowerElement):
        lo = as_fraction(lo)
    if not lo < hi:
        raise ValueError("need lo < hi")
    s_lo, s_hi = exact_sign_at(p, lo), exact_sign_at(p, hi)
    base = dict(polynomial=p, lo=lo, hi=hi, sign_lo=s_lo, sign_hi=s_hi)
    if s_lo <= 0 or s_hi <= 0:
        return PositivityCertificate(False, **base, reason="non-positive at an endpoint")
    if p.degree < 1:
        return PositivityCertificate(True, **base, reason="positive constant")
    if isinstance(lo, Fraction):
        n = sturm_root_count(p, (lo, hi))
        return PositivityCertificate(
            n == 0, **base, window=RationalInterval(lo, hi), root_count=n,
            reason="no roots in window" if n == 0 else "root inside interval",
        )
    width = (hi - float_floor(lo)) or Fraction(1)
    for k in range(budget):
        width = width / 2
        iv = enclose(lo, width)
        l0, l1 = iv.lo, iv.hi
        if l1 < hi:
            if p(l1) == 0:
                return PositivityCertificate(False, **base, refinements=k, reason=f"root at {format_rational(l1)}")
            inner = sturm_root_count(p, (l1, hi))
            if inner > 0:
                return PositivityCertificate(
                    False, **base, window=RationalInterval(l1, hi), root_count=inner,
                    refinements=k, reason="root inside interval",
                )
        if p(l0) == 0:
            continue
        n = sturm_root_count(p, (l0, hi))
        if n == 0:
            return PositivityCertificate(
                True, **base, window=RationalInterval(l0, hi), root_count=0,
                refinements=k, reason="no roots in rational superinterval",
            )
    raise UndecidedError(f"positivity of {p!r} undecided after {budget} refinements")


def float_floor(x) -> Fraction:
    """A rational lower bound for x (any exact scalar)."""
    if isinstance(x, TowerElement):
        return enclose(x, Fraction(1)).lo
    return Fraction(x)


def sign_on_halfopen(p: Polynomial, lo, hi, budget: int = DEFAULT_BUDGET) -> dict:
    """Constant sign of p on [lo, hi) where p may vanish at hi.

    Divides out the full power of (t - hi), certifies the cofactor is
    positive or negative on [lo, hi], and combines with (-1)^k.
    """
    hi = as_fraction(hi)
    k = 0
    q = p
    lin = Polynomial((-hi, 1))
    while not q.is_zero() and q(hi) == 0:
        q = q.exact_div(lin)
        k += 1
    cert = poly_positive_on(q, lo, hi, budget)
    sign = 1
    if not cert.holds:
        cert = poly_positive_on(-q, lo, hi, budget)
        sign = -1
        if not cert.holds:
            return {"constant_sign": False, "multiplicity_at_hi": k, "cofactor": cert}
    return {
        "constant_sign": True,
        "sign": sign * (-1) ** k,
        "multiplicity_at_hi": k,
        "cofactor": cert,
    }
