from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehnfill import family, reflect
from dehnfill.exactnum import Polynomial
from dehnfill.exactnum import matrix as mx


@pytest.fixture(scope="module")
def sys_t3():
    return reflect.realize(family.cartan_at(family.t_three()))


def test_realization_reproduces_cartan(sys_t3):
    A = sys_t3.A
    assert all(sys_t3.pairing(s, t) == A[s, t] for s in range(10) for t in range(10))
    assert sys_t3.dimension == 5


def test_relations_at_t3(sys_t3):
    r = reflect.verify_relations(sys_t3)
    assert r.passed, r.failures
    c = r.checks
    assert c["involution"] == {"holds": 10, "of": 10}
    assert c["unprimed_cube_identity"] == {"holds": 10, "of": 10}
    assert c["mixed_square_identity"] == {"holds": 20, "of": 20}
    assert c["primed_cube_identity"] == {"holds": 10, "of": 10}
    assert c["matched_product_exceeds_4"]["holds"] == 5
    assert c["primed_products_equal_one"] is True


def test_meridian_identity_at_t3(sys_t3):
    for i, j in [(0, 1), (2, 4), ("3'", "5'")]:
        m = reflect.meridian_holonomy(sys_t3, i, j)
        assert m.is_identity and m.charpoly_matches
        assert m.cos2alpha == Fraction(-1, 2)  # 2 alpha = 2 pi / 3


@pytest.mark.parametrize("t", [Fraction(1, 2), Fraction(1, 10), Fraction(1)])
def test_relations_at_rationals(t):
    r = reflect.verify_relations(reflect.realize(family.cartan_at(t)))
    assert r.passed, r.failures
    assert r.checks["primed_products_equal_one"] is False
    assert "primed_cube_identity" not in r.checks


def test_meridian_at_half():
    m = reflect.meridian_holonomy(reflect.realize(family.cartan_at(Fraction(1, 2))), 0, 1)
    assert m.cos2alpha == Fraction(14311, 17689)
    assert m.charpoly_matches and not m.is_identity and not m.unipotent


def test_meridian_unipotent_at_1():
    m = reflect.meridian_holonomy(reflect.realize(family.cartan_at(1)), 0, 1)
    assert m.unipotent and not m.is_identity


def test_pivot_order_changes_gauge_not_conjugacy_class():
    A = family.cartan_at(Fraction(1, 3))
    s1 = reflect.realize(A)
    s2 = reflect.realize(A, order=list(reversed(range(10))))
    assert s1.pivots != s2.pivots
    for a, b in [(0, 1), (0, 5), (5, 6), (1, 7)]:
        assert reflect.product_charpoly(s1, a, b) == reflect.product_charpoly(s2, a, b)


def test_rotation_form():
    # product 1: rotation by 2 pi / 3
    assert reflect.rotation_form(Fraction(1)) == Polynomial((-1, 1)) ** 3 * Polynomial((1, 1, 1))


def test_realize_errors():
    with pytest.raises(reflect.RealizationError):
        reflect.realize(family.cartan_at())
    with pytest.raises(reflect.RealizationError, match="rank"):
        reflect.realize(family.cartan_at(Fraction(1, 2)), dimension=4)


def test_product_needs_two_generators(sys_t3):
    with pytest.raises(ValueError):
        reflect.product_charpoly(sys_t3, 1, 1)


@settings(max_examples=10)
@given(st.fractions(min_value=Fraction(1, 20), max_value=1, max_denominator=40))
def test_reflection_basics_at_random_t(t):
    s = reflect.realize(family.cartan_at(t))
    for g in range(10):
        R = reflect.reflection_matrix(s, g)
        assert mx.is_identity(mx.matmul(R, R))
        assert mx.determinant(R) == -1
    A = s.A
    for a, b in [(0, 1), (5, 6), (0, 6), (2, 7)]:
        P = reflect.product(s, a, b)
        assert mx.charpoly(P) == reflect.rotation_form(A[a, b] * A[b, a])
