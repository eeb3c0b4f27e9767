"""Projective reflections realizing a rank-5 Cartan matrix, and exact checks
of the relations they satisfy."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import CartanMatrix
from .exactnum import Polynomial, to_text
from .exactnum import matrix as mx
from .exactnum.matrix import scalar_sign


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class ReflectionSystem:
    """alpha[s] is a covector, b[s] a vector, with alpha[s](b[t]) = A[s, t]."""

    A: CartanMatrix
    alpha: tuple
    b: tuple
    dimension: int
    pivots: tuple = ()

    @property
    def labels(self):
        return self.A.labels

    def pairing(self, s: int, t: int):
        return sum((x * y for x, y in zip(self.alpha[s], self.b[t])), Fraction(0))

    def index(self, s) -> int:
        return s if isinstance(s, int) else self.A.labels.index(s)


def realize(A: CartanMatrix, order=None, dimension: int = 5) -> ReflectionSystem:
    """Rank factorization A = F G through a nonsingular pivot block.

    ``order`` permutes the pivot search; different orders give different
    gauges of the same reflection group.
    """
    if not A.is_pointwise:
        raise RealizationError("realize needs a matrix at a point")
    N = A.size
    order = list(range(N)) if order is None else list(order)
    rows = A.rows()
    permuted = [[rows[i][j] for j in order] for i in order]
    r, prow, pcol = mx.bareiss_echelon(permuted)
    if r != dimension:
        raise RealizationError(f"rank {r}, expected {dimension}")
    R = [order[i] for i in prow]
    C = [order[j] for j in pcol]
    K_inv = mx.inverse(mx.submatrix(rows, R, C))
    F = [[rows[s][c] for c in C] for s in range(N)]
    G = mx.matmul(K_inv, [rows[r_] for r_ in R])
    alpha = tuple(tuple(F[s]) for s in range(N))
    b = tuple(tuple(G[k][t] for k in range(dimension)) for t in range(N))
    sys = ReflectionSystem(A, alpha, b, dimension, (tuple(R), tuple(C)))
    for s in range(N):
        for t in range(N):
            if sys.pairing(s, t) != A[s, t]:
                raise RealizationError(f"factorization check failed at ({A.labels[s]}, {A.labels[t]})")
    return sys


def reflection_matrix(sys: ReflectionSystem, s) -> list:
    """Id - b_s alpha_s, acting on column vectors."""
    s = sys.index(s)
    n = sys.dimension
    a, b = sys.alpha[s], sys.b[s]
    return [[(1 if i == j else 0) - b[i] * a[j] for j in range(n)] for i in range(n)]


def product(sys: ReflectionSystem, s, t) -> list:
    return mx.matmul(reflection_matrix(sys, s), reflection_matrix(sys, t))


def rotation_form(cartan_product) -> Polynomial:
    """(x - 1)^3 (x^2 - (P - 2) x + 1) for the product P = A_st A_ts."""
    return Polynomial((-1, 1)) ** 3 * Polynomial((1, -(cartan_product - 2), 1))


def product_charpoly(sys: ReflectionSystem, s, t) -> Polynomial:
    s, t = sys.index(s), sys.index(t)
    if s == t:
        raise ValueError("need two distinct generators")
    return mx.charpoly(product(sys, s, t))


@dataclass
class RelationReport:
    verdict: str
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "checks": self.checks, "failures": self.failures}


def _pair_kind(labels, s, t) -> str:
    ps, pt = labels[s].endswith("'"), labels[t].endswith("'")
    if ps and pt:
        return "primed"
    if not ps and not pt:
        return "unprimed"
    if labels[s].rstrip("'") == labels[t].rstrip("'"):
        return "matched"
    return "mixed"


def verify_relations(sys: ReflectionSystem) -> RelationReport:
    """Exact relation checks for a system built from the 10-facet family."""
    start = time.perf_counter()
    A, labels = sys.A, sys.labels
    N = A.size
    I = mx.identity(sys.dimension)
    failures = []
    counts = {}

    def record(name, ok, where):
        counts.setdefault(name, [0, 0])
        counts[name][0] += 1
        if ok:
            counts[name][1] += 1
        else:
            failures.append({"check": name, "at": where})

    refl = [reflection_matrix(sys, s) for s in range(N)]
    for s in range(N):
        sq = mx.matmul(refl[s], refl[s])
        record("involution", mx.mat_equal(sq, I), [labels[s]])
        record("det_minus_one", mx.determinant(refl[s]) == -1, [labels[s]])
        record("trace_three", mx.trace(refl[s]) == 3, [labels[s]])
    primed_cube_identity = True
    for s, t in itertools.combinations(range(N), 2):
        where = [labels[s], labels[t]]
        P = mx.matmul(refl[s], refl[t])
        prod = A[s, t] * A[t, s]
        record("det_product_one", mx.determinant(P) == 1, where)
        record("trace_product", mx.trace(P) == 3 + (prod - 2), where)
        kind = _pair_kind(labels, s, t)
        if kind == "unprimed":
            record("unprimed_cube_identity", mx.mat_equal(mx.matpow(P, 3), I), where)
        elif kind == "mixed":
            record("mixed_square_identity", mx.mat_equal(mx.matpow(P, 2), I), where)
        elif kind == "matched":
            record("matched_product_exceeds_4", scalar_sign(prod - 4) > 0, where)
        else:
            record("primed_rotation_charpoly", mx.charpoly(P) == rotation_form(prod), where)
            if prod == 1:
                ok = mx.mat_equal(mx.matpow(P, 3), I)
                record("primed_cube_identity", ok, where)
            else:
                primed_cube_identity = False
    checks = {name: {"holds": ok, "of": total} for name, (total, ok) in counts.items()}
    checks["primed_products_equal_one"] = primed_cube_identity
    verdict = "pass" if not failures else "fail"
    return RelationReport(verdict, checks, failures, time.perf_counter() - start)


@dataclass(frozen=True)
class MeridianRecord:
    matrix: tuple
    cos2alpha: object  # c = A_ij A_ji / 2 - 1
    cos6alpha: object  # 4c^3 - 3c
    charpoly_matches: bool
    is_identity: bool
    unipotent: bool

    def to_json(self) -> dict:
        return {
            "cos_2alpha": to_text(self.cos2alpha),
            "cos_6alpha": to_text(self.cos6alpha),
            "charpoly_matches": self.charpoly_matches,
            "is_identity": self.is_identity,
            "unipotent": self.unipotent,
            "matrix": [[to_text(x) for x in row] for row in self.matrix],
        }


def meridian_holonomy(sys: ReflectionSystem, i, j) -> MeridianRecord:
    """(sigma_i sigma_j)^3 for two primed facets, with its rotation cosine."""
    i, j = sys.index(i), sys.index(j)
    if i == j:
        raise ValueError("need two distinct facets")
    A = sys.A
    c = A[i, j] * A[j, i] / 2 - 1
    c6 = 4 * c ** 3 - 3 * c
    M = mx.matpow(product(sys, i, j), 3)
    expected = Polynomial((-1, 1)) ** 3 * Polynomial((1, -2 * c6, 1))
    cp = mx.charpoly(M)
    return MeridianRecord(
        tuple(tuple(r) for r in M),
        c,
        c6,
        cp == expected,
        mx.is_identity(M),
        cp == Polynomial((-1, 1)) ** 5,
    )
