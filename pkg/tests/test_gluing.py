import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehnfill import family, gluing
from dehnfill.gluing import GluedComplex, StructuralError


def without_rule(C, k):
    D = GluedComplex(list(C.tags), C.poset)
    for i, r in enumerate(C.rules):
        if i != k:
            D.glue(*r)
    return D


# -- K6 ----------------------------------------------------------------------------


def test_default_k6_is_perfect(k6):
    assert k6.is_perfect()
    for i, j in itertools.combinations(range(1, 6), 2):
        assert gluing.pair_union_cycles(k6, i, j) == [6]


def test_every_k6_colouring_is_perfect():
    cols = list(gluing.all_k6_colorings())
    assert len(cols) == 6
    assert all(g.is_perfect() for g in cols)


def test_affine_k8_is_not_perfect():
    g = gluing.affine_k8()
    assert not g.is_perfect()
    assert gluing.pair_union_cycles(g, 1, 2) == [4, 4]


@pytest.mark.parametrize(
    "edges,msg",
    [
        ([(0, 1, 1)] * 15, "twice"),
        ([(0, 0, 1)], "bad edge"),
        ([(0, 1, 6)], "outside"),
        ([(0, 1, 1)], "expected 15"),
    ],
)
def test_colouring_validation(edges, msg):
    with pytest.raises(gluing.ColoringError, match=msg):
        gluing.EdgeLabeledK6(edges)


def test_improper_colouring():
    edges = [(u, v, 1 if u == 0 else 2) for u, v in itertools.combinations(range(6), 2)]
    with pytest.raises(gluing.ColoringError):
        gluing.EdgeLabeledK6(edges)


def test_k6_file_round_trip(k6):
    assert gluing.parse_k6_file("# default\n" + gluing.format_k6_file(k6)) == k6


@pytest.mark.parametrize("bad,line", [("0 1\n", 1), ("0 1 1\n0 2 x\n", 2)])
def test_k6_file_errors(bad, line):
    with pytest.raises(gluing.ColoringError, match=f"line {line}"):
        gluing.parse_k6_file(bad)


# -- block -----------------------------------------------------------------------------


def test_block(block):
    assert block.n_cells == 6 and len(block.rules) == 15
    comps = gluing.boundary_components(block)
    assert len(comps) == 5
    assert all(len(c) == 6 for c in comps)
    # each component is the copies of one primed facet
    assert sorted({s for _, s in c} for c in comps) == [{s} for s in range(5)]
    assert not block.is_orientable()


def test_block_vertex_links(block):
    r = gluing.vertex_link_check(block, allow_boundary=True)
    assert r.passed and r.with_boundary == r.vertex_classes
    strict = gluing.vertex_link_check(block)
    assert not strict.passed
    with pytest.raises(StructuralError):
        strict.require()


def test_single_cell():
    C = gluing.single_cell()
    assert gluing.euler_characteristic(C) == 30 - 60 + 40 - 10 + 1
    assert len(gluing.boundary_components(C)) == 10


def test_self_gluing_rejected():
    C = gluing.single_cell()
    with pytest.raises(StructuralError):
        C.glue(0, 0, 1)


def test_double_gluing_rejected(k6):
    C = gluing.build_block(k6)
    u, v, s = C.rules[0]
    with pytest.raises(StructuralError):
        C.glue(u, v, s)


# -- X' and X -----------------------------------------------------------------------------


def test_xprime(xprime):
    assert xprime.n_cells == 36 and xprime.is_closed()
    assert not xprime.is_orientable()
    assert gluing.euler_characteristic(xprime) == 6
    assert xprime.counts_by_dim() == {0: 30, 1: 180, 2: 300, 3: 180, 4: 36}
    assert len(xprime.rules) * 2 == 36 * 10


def test_x(X):
    assert X.n_cells == 72 and X.is_connected() and X.is_orientable()
    assert gluing.euler_characteristic(X) == 12
    assert X.counts_by_dim() == {0: 60, 1: 360, 2: 600, 3: 360, 4: 72}
    assert not X.notes


def test_covering_consistency(X, xprime):
    assert gluing.covering_consistency(X, Fraction(1, 6), 72)
    assert gluing.covering_consistency(xprime, Fraction(1, 6), 36)
    assert not gluing.covering_consistency(X, Fraction(1, 6), 71)


def test_cover_doubles_euler(xprime, X):
    assert gluing.euler_characteristic(X) == 2 * gluing.euler_characteristic(xprime)


def test_cover_of_orientable_is_disconnected(X):
    D = gluing.orientation_double_cover(X)
    assert D.n_cells == 144 and not D.is_connected() and D.notes


def test_cover_needs_closed(block):
    with pytest.raises(StructuralError):
        gluing.orientation_double_cover(block)


# -- surfaces ---------------------------------------------------------------------------


def test_sigma_and_tprime_on_x(X):
    sig = gluing.sigma_analysis(X)
    tp = gluing.tprime_analysis(X)
    assert len(sig) == 10 and len(tp) == 10
    for s in sig + tp:
        assert s.euler == 0 and s.orientable and s.classification == "torus"
    assert sum(s.incidences for s in sig) == 720
    assert all(s.incidences == 72 and s.triangles == 12 for s in sig)


def test_sigma_on_xprime(xprime):
    sig = gluing.sigma_analysis(xprime)
    assert len(sig) == 10
    assert all(s.classification == "Klein bottle" for s in sig)
    assert len(gluing.tprime_analysis(xprime)) == 10


def test_surfaces_are_disjoint(X):
    kinds = Counter()
    for cid in range(len(X.classes())):
        if X.class_dim(cid) == 2:
            kinds[gluing.ridge_type(X.class_subset(cid))] += 1
    assert kinds == {"mixed": 360, "filling": 120, "unprimed": 120}


def test_surface_needs_closed(X):
    with pytest.raises(StructuralError):
        gluing.sigma_analysis(without_rule(X, 0))


# -- ridges ----------------------------------------------------------------------------


def test_ridge_report(X, t3):
    recs = gluing.ridge_report(X, gluing.angle_map(family.cartan_at(t3)))
    by = Counter((r.kind, r.incidence, r.angle_sum_over_pi) for r in recs)
    assert by == {("mixed", 4, 2): 360, ("filling", 6, 2): 120, ("unprimed", 6, 2): 120}


def test_ridge_report_away_from_t3(X):
    # t = 1/2: filling angle not a rational multiple of pi, the rest unchanged
    recs = gluing.ridge_report(X, gluing.angle_map(family.cartan_at(Fraction(1, 2))))
    for r in recs:
        if r.kind == "filling":
            assert r.incidence == 6 and r.angle_sum_over_pi is None
        else:
            assert r.angle_sum_over_pi == 2


# -- vertex links --------------------------------------------------------------------------


def test_vertex_links(X, xprime):
    r = gluing.vertex_link_check(X).require()
    assert r.vertex_classes == 60 and r.closed == 60
    assert gluing.vertex_link_check(xprime).passed


def test_misglued_complex_fails(X):
    D = without_rule(X, 5)
    r = gluing.vertex_link_check(D)
    assert not r.passed
    with pytest.raises(StructuralError, match="vertex class"):
        r.require()


# -- invariance under relabelling --------------------------------------------------------------


@settings(max_examples=6)
@given(st.permutations(range(1, 6)), st.permutations(range(6)))
def test_counts_invariant_under_relabeling(labels, nodes):
    k6 = gluing.default_k6()
    perm = dict(zip(range(1, 6), labels))
    g = k6.relabeled(perm).renamed(nodes)
    assert g.is_perfect()
    for i, j in itertools.combinations(range(1, 6), 2):
        assert gluing.pair_union_cycles(g, i, j) == [6]
    Xp = gluing.build_xprime(g, g)
    X = gluing.orientation_double_cover(Xp)
    assert Xp.counts_by_dim() == {0: 30, 1: 180, 2: 300, 3: 180, 4: 36}
    assert X.counts_by_dim() == {0: 60, 1: 360, 2: 600, 3: 360, 4: 72}
    assert len(gluing.boundary_components(gluing.build_block(g))) == 5
    assert [s.classification for s in gluing.sigma_analysis(X)] == ["torus"] * 10


@pytest.mark.parametrize("k", range(6))
def test_every_colouring_gives_the_same_complex_counts(k):
    g = list(gluing.all_k6_colorings())[k]
    X = gluing.orientation_double_cover(gluing.build_xprime(g, gluing.default_k6()))
    assert X.is_orientable() and gluing.euler_characteristic(X) == 12
