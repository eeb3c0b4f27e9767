from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from dehnfill.exactnum import (
    EndpointRootError,
    Polynomial,
    PoleError,
    RationalFunction,
    RationalInterval,
    TowerElement,
    UndecidedError,
    cos_squared_pi_over,
    enclose,
    evaluate,
    from_text,
    parse_polynomial,
    parse_rational,
    poly_positive_on,
    serialize_polynomial,
    sign_on_halfopen,
    sturm_root_count,
    to_text,
    tower_sign,
)
from dehnfill.exactnum import matrix as mx

mpmath.mp.dps = 60
SQ2 = sympy.sqrt(2)
SQD = sympy.sqrt(31 + 22 * SQ2)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
towers = st.builds(TowerElement, small, small, small, small)


def sym(x: TowerElement):
    a, b, c, d = (sympy.Rational(v.numerator, v.denominator) for v in x.coordinates)
    return a + b * SQ2 + (c + d * SQ2) * SQD


def mp(x: TowerElement):
    a, b, c, d = (mpmath.mpf(v.numerator) / v.denominator for v in x.coordinates)
    s2 = mpmath.sqrt(2)
    return a + b * s2 + (c + d * s2) * mpmath.sqrt(31 + 22 * s2)


# -- rationals ----------------------------------------------------------------


@pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), (" 7/14 ", Fraction(1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1.5.2"])
def test_parse_rational_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(bad)


def test_interval_rejects_empty():
    with pytest.raises(ValueError):
        RationalInterval(1, 0)


# -- tower ----------------------------------------------------------------------


@given(towers, towers)
def test_tower_ring_ops_match_sympy(x, y):
    assert sympy.simplify(sym(x + y) - (sym(x) + sym(y))) == 0
    assert sympy.expand(sym(x * y) - sym(x) * sym(y)).equals(0)


@given(towers)
def test_tower_inverse(x):
    assume(x != 0)
    assert x * x.inverse() == 1


@given(towers)
def test_tower_sign_matches_high_precision(x):
    v = mp(x)
    s = tower_sign(x)
    if x == 0:
        assert s == 0
    else:
        assert abs(v) > mpmath.mpf(10) ** -40
        assert s == (1 if v > 0 else -1)


@given(towers, st.sampled_from([Fraction(1, 10), Fraction(1, 10 ** 6), Fraction(1, 10 ** 15)]))
def test_enclosure_contains_value(x, width):
    iv = enclose(x, width)
    assert iv.width <= width
    v = mp(x)
    assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= v <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator


@given(towers)
def test_tower_text_round_trip(x):
    assert from_text(to_text(x)) == x


def test_t3_enclosure(t3):
    iv = enclose(t3, Fraction(1, 10 ** 4))
    assert iv.strictly_inside(Fraction(421, 10000), Fraction(423, 10000))


def test_t3_matches_closed_form(t3):
    exact = (11 + 9 * SQ2 - 3 * SQD) / 2
    assert abs(float(t3) - float(exact.evalf(30))) < 1e-14


def test_tower_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        TowerElement(1) / TowerElement(0)


# -- polynomials and rational functions ------------------------------------------

polys = st.lists(st.integers(-9, 9), min_size=1, max_size=7).map(Polynomial)
t = sympy.Symbol("t")


def sym_poly(p: Polynomial):
    return sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(map(Fraction, p.coeffs)))


@given(polys, polys)
def test_polynomial_ops_match_sympy(p, q):
    assert sympy.expand(sym_poly(p * q) - sym_poly(p) * sym_poly(q)) == 0
    assume(not q.is_zero())
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@given(polys, polys)
def test_gcd_matches_sympy(p, q):
    assume(not p.is_zero() and not q.is_zero())
    g = p.gcd(q)
    expected = sympy.Poly(sympy.gcd(sym_poly(p), sym_poly(q)), t).monic()
    assert sympy.Poly(sym_poly(g), t).monic() == expected


@given(polys)
def test_polynomial_text_round_trip(p):
    assert parse_polynomial(serialize_polynomial(p)) == p


@given(polys, small, small)
def test_sturm_count_matches_sympy(p, a, b):
    assume(p.degree >= 1 and a < b and p(a) != 0 and p(b) != 0)
    roots = sympy.Poly(sym_poly(p), t).real_roots()
    expected = len({r for r in roots if sympy.Rational(a.numerator, a.denominator) < r < sympy.Rational(b.numerator, b.denominator)})
    assert sturm_root_count(p, (a, b)) == expected


def test_sturm_endpoint_root():
    with pytest.raises(EndpointRootError):
        sturm_root_count(Polynomial((-1, 0, 1)), (1, 2))


def test_positivity_certificate():
    p = Polynomial((Fraction(-1, 5), 0, 1))  # t^2 - 1/5
    assert poly_positive_on(p, Fraction(1, 2), 1).holds
    assert not poly_positive_on(p, Fraction(0), 1).holds


def test_positivity_with_tower_endpoint(t3):
    # t - 1/25 is positive on [t3, 1] since t3 ~ 0.0422
    assert poly_positive_on(Polynomial((Fraction(-1, 25), 1)), t3, 1).holds
    assert not poly_positive_on(Polynomial((Fraction(-1, 20), 1)), t3, 1).holds


def test_positivity_budget_exhausted(t3):
    # root just below t3: four halvings cannot separate it from t3
    near = enclose(t3, Fraction(1, 10 ** 40)).lo
    with pytest.raises(UndecidedError):
        poly_positive_on(Polynomial((-near, 1)), t3, 1, budget=4)


def test_sign_on_halfopen_with_root_at_hi():
    # (1 - t)^2 (t + 1) vanishes at 1 only
    p = Polynomial((1, -1)) ** 2 * Polynomial((1, 1))
    out = sign_on_halfopen(p, Fraction(0), Fraction(1))
    assert out["constant_sign"] and out["sign"] == 1 and out["multiplicity_at_hi"] == 2


def test_ratfunc_evaluate_and_pole():
    x = RationalFunction.t()
    r = (x + 1) / (x - 2)
    assert evaluate(r, Fraction(3)) == 4
    with pytest.raises(PoleError):
        evaluate(r, Fraction(2))


def test_ratfunc_derivative_matches_sympy():
    x = RationalFunction.t()
    r = x ** 3 / (x * x + 7 * x + 1)
    d = r.derivative()
    ts = sympy.diff(t ** 3 / (t ** 2 + 7 * t + 1), t)
    for v in (Fraction(1, 3), Fraction(2), Fraction(-5, 7)):
        assert evaluate(d, v) == ts.subs(t, sympy.Rational(v.numerator, v.denominator))


def test_ratfunc_at_tower(t3):
    x = RationalFunction.t()
    assert evaluate(x * x - 1, t3) == t3 * t3 - 1


@given(polys, polys)
def test_ratfunc_text_round_trip(p, q):
    assume(not q.is_zero())
    r = RationalFunction(p, q)
    assert from_text(to_text(r)) == r


# -- matrices -----------------------------------------------------------------------

mats = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(mats)
def test_rank_det_charpoly_match_sympy(M):
    F = [[Fraction(x) for x in row] for row in M]
    S = sympy.Matrix(M)
    assert mx.rank(F) == S.rank()
    assert mx.determinant(F) == S.det()
    cp = mx.charpoly(F)
    assert [sympy.Integer(int(c)) for c in reversed(cp.coeffs)] == S.charpoly(t).all_coeffs()


@given(mats)
def test_inverse(M):
    F = [[Fraction(x) for x in row] for row in M]
    assume(mx.determinant(F) != 0)
    assert mx.is_identity(mx.matmul(F, mx.inverse(F)))


def test_tower_matrix_rank(t3):
    M = [[t3, 1], [t3 * t3, t3]]
    assert mx.rank(M) == 1
    assert mx.determinant(M) == 0


def test_leading_minors():
    M = [[Fraction(2), Fraction(-1)], [Fraction(-1), Fraction(2)]]
    assert mx.leading_minors(M) == [2, 3]


# -- certified cosines -------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 4, 5, 6, 7, 12, 30])
def test_cos_squared_enclosure(p):
    iv = cos_squared_pi_over(p, digits=30)
    v = mpmath.cos(mpmath.pi / p) ** 2
    lo = mpmath.mpf(iv.lo.numerator) / iv.lo.denominator
    hi = mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
    assert lo <= v <= hi
    assert hi - lo < mpmath.mpf(10) ** -25
