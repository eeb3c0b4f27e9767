"""The 10x10 Cartan family C_t on [t3, 1] and its certificates.

Index order is (1',...,5', 1,...,5). Primed facets come first.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import cartan
from .cartan import CartanMatrix, CartanType
from .exactnum import (
    Polynomial,
    RationalFunction,
    RationalInterval,
    TowerElement,
    UndecidedError,
    as_fraction,
    cos_squared_pi_over,
    enclose,
    evaluate,
    poly_positive_on,
    sign_on_halfopen,
    to_text,
    tower_sign,
)
from .exactnum import matrix as mx

PRIMED = tuple(f"{i}'" for i in range(1, 6))
UNPRIMED = tuple(str(i) for i in range(1, 6))
LABELS = PRIMED + UNPRIMED


def primed(i: int) -> int:
    """Matrix index of facet i' (i = 1..5)."""
    return i - 1


def unprimed(i: int) -> int:
    return 4 + i


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Coefficients:
    f: RationalFunction
    h: RationalFunction
    g: tuple
    gbar: tuple

    def named(self) -> dict:
        out = {"f": self.f, "h": self.h}
        for p in range(4):
            out[f"g_{p}"] = self.g[p]
            out[f"gbar_{p}"] = self.gbar[p]
        return out


@lru_cache(maxsize=1)
def coefficients() -> Coefficients:
    t = RationalFunction.t()
    q1 = t * t + t + 1
    q7 = t * t + 7 * t + 1
    f = t * (t + 2) ** 3 * (2 * t + 1) ** 3 / (q1 ** 2 * q7 ** 2)
    h = 2 + 1 / t + t * (t + 2) ** 4 / (q1 * q7)
    g = tuple(2 * t ** p * (t + 2) ** p * (2 * t + 1) ** (3 - p) / (q1 * q7) for p in range(4))
    gbar = tuple(4 * f / gp for gp in g)
    return Coefficients(f, h, g, gbar)


def t_three() -> TowerElement:
    """(11 + 9 sqrt2 - 3 sqrt(31 + 22 sqrt2)) / 2, where f equals 1/4."""
    return TowerElement(Fraction(11, 2), Fraction(9, 2), Fraction(-3, 2), 0)


def _check_domain(t):
    if isinstance(t, TowerElement):
        ok = tower_sign(t - t_three()) >= 0 and tower_sign(t - 1) <= 0
    else:
        t = as_fraction(t)
        ok = tower_sign(t_three() - t) <= 0 and t <= 1
    if not ok:
        raise DomainError(f"t = {to_text(t)} lies outside [t3, 1]")
    return t


def _layout(c: Coefficients, t, point: bool):
    """Entries of C_t, either as values at t or as rational functions."""
    if point:
        val = lambda rf: evaluate(rf, t)  # noqa: E731
        inv_t, neg_t = -1 / t, -t
        two = Fraction(2)
    else:
        val = lambda rf: rf  # noqa: E731
        tt = RationalFunction.t()
        inv_t, neg_t = -1 / tt, -tt
        two = RationalFunction(2)
    zero = two * 0
    n = 10
    A = [[zero] * n for _ in range(n)]
    h = val(c.h)
    g = [val(x) for x in c.g]
    gbar = [val(x) for x in c.gbar]
    for i in range(5):
        A[i][i] = two
        A[5 + i][5 + i] = two
        A[i][5 + i] = -h
        A[5 + i][i] = -two
        for j in range(i + 1, 5):
            A[i][j] = -gbar[j - i - 1]
            A[j][i] = -g[j - i - 1]
            A[5 + i][5 + j] = inv_t
            A[5 + j][5 + i] = neg_t
    return A


def cartan_at(t=None) -> CartanMatrix:
    """C_t at a point of [t3, 1], or symbolically when t is None."""
    c = coefficients()
    if t is None:
        return CartanMatrix(tuple(map(tuple, _layout(c, None, False))), LABELS)
    t = _check_domain(t)
    return CartanMatrix(tuple(map(tuple, _layout(c, t, True))), LABELS)


def rotation_permutation() -> tuple[int, ...]:
    """The order-5 shift i -> i+1 on both blocks, as an index permutation."""
    return tuple((i + 1) % 5 for i in range(5)) + tuple(5 + (i + 1) % 5 for i in range(5))


# -- points and angles --------------------------------------------------------


@dataclass(frozen=True)
class FamilyPoint:
    """A parameter value, exact (rational or t3) or as a rational enclosure."""

    t: object | None
    enclosure: RationalInterval
    p: int | None = None
    cos2: object | None = None

    @property
    def exact(self) -> bool:
        return self.t is not None

    def representative(self):
        """An exact point to build matrices at; t itself when known."""
        return self.t if self.t is not None else self.enclosure.midpoint

    def to_json(self) -> dict:
        out = {"exact": self.exact, "enclosure": self.enclosure.to_json(), "p": self.p}
        if self.t is not None:
            out["t"] = to_text(self.t)
        if self.cos2 is not None:
            out["cos2_alpha"] = to_text(self.cos2)
        return out


def point(t) -> FamilyPoint:
    if isinstance(t, str) and t.strip().lower() in ("t3", "t_3"):
        t = t_three()
    t = _check_domain(t)
    cos2 = evaluate(coefficients().f, t)
    if isinstance(t, TowerElement):
        iv = enclose(t, Fraction(1, 10 ** 12))
    else:
        iv = RationalInterval(t, t)
    p = 3 if cos2 == Fraction(1, 4) else None
    return FamilyPoint(t, iv, p, cos2)


_EXACT_COS2 = {3: Fraction(1, 4), 4: Fraction(1, 2), 6: Fraction(3, 4)}


def solve_t_for_p(p: int, width=Fraction(1, 10 ** 12)) -> FamilyPoint:
    """The t in [t3, 1) with f(t) = cos^2(pi/p); exact for p = 3."""
    if p < 3:
        raise ValueError("p must be at least 3")
    width = as_fraction(width)
    if p == 3:
        t3 = t_three()
        return FamilyPoint(t3, enclose(t3, width), 3, Fraction(1, 4))
    f = coefficients().f
    digits = 40
    while True:
        target = _EXACT_COS2.get(p)
        c_lo, c_hi = (target, target) if target is not None else tuple(cos_squared_pi_over(p, digits))
        a = enclose(t_three(), Fraction(1, 10 ** 6)).hi
        b = Fraction(1)
        # f is increasing, f(a) < 1/4 + tiny < c_lo and f(1) = 1 > c_hi
        assert f(a) < c_lo and f(b) > c_hi
        stuck = False
        while b - a > width:
            m = (a + b) / 2
            fm = f(m)
            if fm < c_lo:
                a = m
            elif fm > c_hi:
                b = m
            elif target is not None:
                return FamilyPoint(m, RationalInterval(m, m), p, target)
            else:
                stuck = True
                break
            # keep denominators short: snap to a dyadic grid finer than width
            a, b = _snap_down(a, width), _snap_up(b, width)
        if not stuck:
            return FamilyPoint(None, RationalInterval(a, b), p, None)
        digits *= 2


def _snap_down(x: Fraction, width: Fraction) -> Fraction:
    q = 1 << (width.denominator.bit_length() + 8)
    return Fraction((x.numerator * q) // x.denominator, q)


def _snap_up(x: Fraction, width: Fraction) -> Fraction:
    q = 1 << (width.denominator.bit_length() + 8)
    return Fraction(-((-x.numerator * q) // x.denominator), q)


@dataclass(frozen=True)
class AngleDictionary:
    """Angles as rational multiples of pi: alpha, theta = 6 alpha = 2 pi / m, p = 3m."""

    alpha_over_pi: Fraction
    theta_over_pi: Fraction
    m: int | None
    p: int | None

    def to_json(self) -> dict:
        return {
            "alpha": f"{self.alpha_over_pi}*pi",
            "theta": f"{self.theta_over_pi}*pi",
            "m": self.m,
            "p": self.p,
        }


def _int_or_none(x: Fraction) -> int | None:
    return int(x) if x.denominator == 1 else None


def angle_dictionary(*, alpha=None, theta=None, m=None, p=None) -> AngleDictionary:
    """Fill in alpha, theta, m, p from any consistent subset (angles in units of pi)."""
    cands = []
    if alpha is not None:
        cands.append(Fraction(alpha))
    if theta is not None:
        cands.append(Fraction(theta) / 6)
    if m is not None:
        if int(m) < 1:
            raise ValueError("m must be a positive integer")
        cands.append(Fraction(1, 3 * int(m)))
    if p is not None:
        if int(p) < 1:
            raise ValueError("p must be a positive integer")
        cands.append(Fraction(1, int(p)))
    if not cands:
        raise ValueError("give at least one of alpha, theta, m, p")
    if any(c != cands[0] for c in cands):
        raise ValueError("inconsistent angle data")
    a = cands[0]
    if a <= 0:
        raise ValueError("alpha must be positive")
    return AngleDictionary(a, 6 * a, _int_or_none(1 / (3 * a)), _int_or_none(1 / a))


# -- certificates -------------------------------------------------------------


@dataclass
class Certificate:
    name: str
    verdict: str  # pass | fail | undecided
    witnesses: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "witnesses": self.witnesses}


def _poly_json(p: Polynomial) -> list[str]:
    return [to_text(c) for c in p.coeffs]


def _positive_or_negative(p: Polynomial, lo, hi):
    """(sign, certificate) when p has constant nonzero sign on [lo, hi], else (0, cert)."""
    cert = poly_positive_on(p, lo, hi)
    if cert.holds:
        return 1, cert
    neg = poly_positive_on(-p, lo, hi)
    if neg.holds:
        return -1, neg
    return 0, cert


DEFAULT_MINOR = (0, 1, 2, 3, 5)  # rows/columns 1',2',3',4',1


def verify_rank_lemma(minor=DEFAULT_MINOR, samples=None) -> Certificate:
    """Rank exactly 5 on all of [t3, 1] and negative type at sample points.

    Generic rank 5 means every 6x6 minor vanishes identically, so rank <= 5
    wherever C_t is defined. A 5x5 minor whose numerator and denominator
    keep a constant nonzero sign on [t3, 1] gives rank >= 5 there.
    """
    start = time.perf_counter()
    C = cartan_at(None)
    rows = C.rows()
    generic = mx.rank(rows)
    t3 = t_three()
    tried = []
    chosen = None
    candidates = [tuple(minor)] + [
        c for c in itertools.combinations(range(10), 5) if c != tuple(minor)
    ]
    for idx in candidates:
        d = mx.determinant(mx.submatrix(rows, idx))
        if d == 0:
            tried.append({"minor": [LABELS[i] for i in idx], "result": "identically zero"})
            continue
        try:
            s_num, c_num = _positive_or_negative(d.num, t3, 1)
            s_den, c_den = _positive_or_negative(d.den, t3, 1)
        except UndecidedError:
            tried.append({"minor": [LABELS[i] for i in idx], "result": "undecided"})
            continue
        if s_num and s_den:
            chosen = (idx, d, s_num, s_den, c_num, c_den)
            break
        tried.append({"minor": [LABELS[i] for i in idx], "result": "sign change on [t3, 1]"})
    wit = {"generic_rank": generic, "rejected_minors": tried}
    verdict = "pass" if generic == 5 else "fail"
    if chosen is None:
        verdict = "undecided" if verdict == "pass" else verdict
    else:
        idx, d, s_num, s_den, c_num, c_den = chosen
        wit["minor"] = {
            "indices": [LABELS[i] for i in idx],
            "numerator": _poly_json(d.num),
            "denominator": _poly_json(d.den),
            "numerator_sign": s_num,
            "denominator_sign": s_den,
            "sturm_root_count_numerator": c_num.root_count,
            "sturm_window": c_num.window.to_json() if c_num.window else None,
            "value_at_1": to_text(d(Fraction(1))),
        }
    point_checks = {}
    for label, tv in (samples or [("t3", t3), ("1/10", Fraction(1, 10)), ("1/2", Fraction(1, 2)), ("1", Fraction(1))]):
        A = cartan_at(tv)
        r = cartan.rank(A)
        kind = cartan.classify(A).kind
        point_checks[label] = {"rank": r, "type": kind.value}
        if r != 5 or kind is not CartanType.NEGATIVE:
            verdict = "fail"
    wit["points"] = point_checks
    return Certificate("rank_lemma", verdict, wit, time.perf_counter() - start)


def factored_derivative() -> RationalFunction:
    t = RationalFunction.t()
    quartic = t ** 4 + 2 * t ** 3 + 21 * t ** 2 + 2 * t + 1
    num = -2 * (t - 1) * (t + 1) * (t + 2) ** 2 * (2 * t + 1) ** 2 * quartic
    return num / ((t * t + t + 1) ** 3 * (t * t + 7 * t + 1) ** 3)


def verify_monotone_f() -> Certificate:
    """f' equals the factored form, each factor has a fixed sign on [t3, 1)."""
    start = time.perf_counter()
    c = coefficients()
    t3 = t_three()
    identity = c.f.derivative() == factored_derivative()
    P = Polynomial
    positive_factors = {
        "t+1": P((1, 1)),
        "(t+2)^2": P((2, 1)) ** 2,
        "(2t+1)^2": P((1, 2)) ** 2,
        "t^4+2t^3+21t^2+2t+1": P((1, 2, 21, 2, 1)),
        "(t^2+t+1)^3": P((1, 1, 1)) ** 3,
        "(t^2+7t+1)^3": P((1, 7, 1)) ** 3,
    }
    factors = {}
    ok = identity
    for name, poly in positive_factors.items():
        cert = poly_positive_on(poly, t3, 1)
        factors[name] = {"positive_on_[t3,1]": cert.holds, "sturm_root_count": cert.root_count}
        ok = ok and cert.holds
    lin = sign_on_halfopen(P((-1, 1)), t3, 1)
    factors["t-1"] = {"sign_on_[t3,1)": lin.get("sign"), "constant_sign": lin["constant_sign"]}
    ok = ok and lin["constant_sign"] and lin["sign"] == -1
    f_t3 = evaluate(c.f, t3)
    f_1 = evaluate(c.f, Fraction(1))
    ok = ok and f_t3 == Fraction(1, 4) and f_1 == 1
    wit = {
        "derivative_matches_factored_form": identity,
        "factors": factors,
        "constant_factor": -2,
        "derivative_sign_on_[t3,1)": 1 if ok else None,
        "f(t3)": to_text(f_t3),
        "f(1)": to_text(f_1),
    }
    return Certificate("monotone_f", "pass" if ok else "fail", wit, time.perf_counter() - start)


def verify_positive_coefficients() -> Certificate:
    start = time.perf_counter()
    t3 = t_three()
    wit = {}
    ok = True
    try:
        for name, rf in coefficients().named().items():
            s_num, c_num = _positive_or_negative(rf.num, t3, 1)
            s_den, c_den = _positive_or_negative(rf.den, t3, 1)
            holds = s_num != 0 and s_num == s_den
            wit[name] = {
                "positive_on_[t3,1]": holds,
                "numerator_sign": s_num,
                "denominator_sign": s_den,
            }
            ok = ok and holds
    except UndecidedError as exc:
        wit["undecided"] = str(exc)
        return Certificate("positive_coefficients", "undecided", wit, time.perf_counter() - start)
    return Certificate("positive_coefficients", "pass" if ok else "fail", wit, time.perf_counter() - start)


def verify_symmetry(t) -> Certificate:
    """The order-5 shift conjugates C_t to a diagonally equivalent matrix."""
    start = time.perf_counter()
    A = cartan_at(t)
    B = A.conjugate_by_permutation(rotation_permutation())
    eq = cartan.equivalent(B, A)
    wit = {"t": "t" if t is None else to_text(t), "equivalent": eq.equivalent}
    if eq.witness:
        wit["diagonal"] = [to_text(x) for x in eq.witness]
    return Certificate("rotation_symmetry", "pass" if eq else "fail", wit, time.perf_counter() - start)

