"""Face posets of mirror polytopes from their Cartan matrices, reference
posets of the truncated family of the 4-simplex, and dihedral angles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import cartan
from .cartan import CartanMatrix, CartanType
from .exactnum import RationalFunction, TowerElement, to_text
from .exactnum.matrix import scalar_sign


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class FacePoset:
    """Faces recorded as facet subsets T with dimension; the empty set is the top cell."""

    labels: tuple
    dimension: int
    faces: dict  # frozenset[int] -> int

    def __post_init__(self):
        if self.faces.get(frozenset()) != self.dimension:
            raise PosetError("the empty subset must be the top cell")
        for s in range(len(self.labels)):
            if self.faces.get(frozenset([s])) != self.dimension - 1:
                raise PosetError(f"facet {self.labels[s]} missing")

    @property
    def size(self) -> int:
        return len(self.labels)

    def of_dim(self, d: int) -> list[frozenset]:
        return sorted((T for T, k in self.faces.items() if k == d), key=lambda T: sorted(T))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.of_dim(d)) for d in range(self.dimension))

    def covers(self) -> list[tuple[frozenset, frozenset]]:
        """Pairs (upper, lower) with lower = upper plus facets and dim one less."""
        out = []
        for T, d in self.faces.items():
            for U, e in self.faces.items():
                if e == d - 1 and T < U:
                    out.append((T, U))
        return out

    def is_graded(self) -> bool:
        # every face below the top is covered by something of one higher dimension
        for U, e in self.faces.items():
            if e == self.dimension:
                continue
            if not any(d == e + 1 and T < U for T, d in self.faces.items()):
                return False
        return True

    def names(self, T) -> list[str]:
        return [self.labels[i] for i in sorted(T)]

    def is_automorphism(self, perm) -> bool:
        for T, d in self.faces.items():
            if self.faces.get(frozenset(perm[i] for i in T)) != d:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "facets": list(self.labels),
            "f_vector": list(self.f_vector()),
            "faces": {str(d): [self.names(T) for T in self.of_dim(d)] for d in range(self.dimension)},
        }


def f_vector(P: FacePoset) -> tuple[int, ...]:
    return P.f_vector()


class _Classifier:
    """Memoized per-subset type lookup with heredity pruning."""

    def __init__(self, A: CartanMatrix):
        self.A = A
        self.kind: dict[frozenset, CartanType] = {}
        self.pos: dict[frozenset, bool] = {frozenset(): True}

    def components(self, T: frozenset) -> list[frozenset]:
        idx = sorted(T)
        sub = self.A.restrict(idx)
        return [frozenset(idx[i] for i in c) for c in cartan.components(sub)]

    def component_kind(self, K: frozenset) -> CartanType:
        if K in self.kind:
            return self.kind[K]
        # every proper principal submatrix of a positive or zero type
        # irreducible matrix is positive
        if len(K) > 1 and not all(self.positive(K - {s}) for s in K):
            kind = CartanType.NEGATIVE
        else:
            kind = cartan.classify(self.A.restrict(sorted(K))).kind
        self.kind[K] = kind
        return kind

    def positive(self, T: frozenset) -> bool:
        if T not in self.pos:
            self.pos[T] = all(self.component_kind(K) is CartanType.POSITIVE for K in self.components(T))
        return self.pos[T]

    def zero_vertex(self, T: frozenset, rank_needed: int) -> bool:
        comps = self.components(T)
        if not all(self.component_kind(K) is CartanType.ZERO for K in comps):
            return False
        return cartan.rank(self.A.restrict(sorted(T))) == rank_needed


def face_poset(A: CartanMatrix, n: int) -> FacePoset:
    """Subsets certified as faces: all-positive components (dim n - |T|), or
    all-zero components of rank n - 1 (vertices)."""
    if not A.is_pointwise:
        raise PosetError("face_poset needs a matrix at a point")
    if cartan.rank(A) != n + 1:
        raise PosetError(f"rank {cartan.rank(A)} does not match dimension {n}")
    N = A.size
    cl = _Classifier(A)
    faces = {frozenset(): n}
    for k in range(1, N):
        for T in map(frozenset, itertools.combinations(range(N), k)):
            if cl.positive(T):
                if k > n:
                    raise PosetError(f"positive subset {sorted(T)} larger than the dimension")
                faces[T] = n - k
            elif cl.zero_vertex(T, n - 1):
                if T in faces:
                    raise PosetError(f"subset {sorted(T)} is both a face and a zero-type vertex")
                faces[T] = 0
    return FacePoset(A.labels, n, faces)


# -- reference posets ---------------------------------------------------------

REFERENCE_LABELS = tuple(f"{i}'" for i in range(1, 6)) + tuple(str(i) for i in range(1, 6))


def _reference_vertices(kind: str) -> list[frozenset]:
    P = list(range(5))  # primed i' is index i
    U = [5 + i for i in range(5)]  # unprimed i is index 5 + i
    out = []
    if kind == "bitruncated":
        for i, j in itertools.combinations(P, 2):
            rest = [u for u in range(5) if u not in (i, j)]
            for k, l in itertools.combinations(rest, 2):
                out.append(frozenset({i, j, U[k], U[l]}))
    elif kind == "rectified":
        for i, j in itertools.combinations(P, 2):
            out.append(frozenset({i, j} | {U[k] for k in range(5) if k not in (i, j)}))
    elif kind == "truncated":
        for i in P:
            rest = [u for u in range(5) if u != i]
            for trip in itertools.combinations(rest, 3):
                out.append(frozenset({i} | {U[k] for k in trip}))
    else:
        raise ValueError(f"unknown reference kind {kind!r}")
    return out


def poset_from_vertices(labels, vertices, n: int) -> FacePoset:
    """Faces are intersections of vertex sets; dimension by longest chain to a vertex."""
    closed = set(vertices)
    frontier = set(vertices)
    while frontier:
        new = set()
        for a in frontier:
            for b in closed:
                c = a & b
                if c not in closed and c not in new:
                    new.add(c)
        closed |= new
        frontier = new
    closed.add(frozenset())
    dims: dict[frozenset, int] = {}
    for T in sorted(closed, key=len, reverse=True):
        above = [dims[U] for U in dims if T < U]
        dims[T] = 0 if not above else 1 + max(above)
    if dims[frozenset()] != n:
        raise PosetError(f"vertex sets generate dimension {dims[frozenset()]}, not {n}")
    return FacePoset(tuple(labels), n, dims)


def reference_poset(kind: str) -> FacePoset:
    return poset_from_vertices(REFERENCE_LABELS, _reference_vertices(kind), 4)


# -- isomorphism --------------------------------------------------------------


def _facet_profiles(P: FacePoset):
    by_facet = {s: [] for s in range(P.size)}
    by_pair = {}
    for T, d in P.faces.items():
        for s in T:
            by_facet[s].append(d)
        for s, t in itertools.combinations(sorted(T), 2):
            by_pair.setdefault((s, t), []).append(d)
    single = {s: tuple(sorted(v)) for s, v in by_facet.items()}
    pair = {k: tuple(sorted(v)) for k, v in by_pair.items()}
    return single, pair


def poset_isomorphic(P: FacePoset, Q: FacePoset):
    """(True, facet bijection P -> Q) or (False, None)."""
    if P.size != Q.size or P.dimension != Q.dimension or P.f_vector() != Q.f_vector():
        return False, None
    sp, pp = _facet_profiles(P)
    sq, pq = _facet_profiles(Q)
    if sorted(sp.values()) != sorted(sq.values()):
        return False, None

    def pair_prof(prof, a, b):
        return prof.get((min(a, b), max(a, b)), ())

    order = sorted(range(P.size), key=lambda s: sp[s])
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(k: int) -> bool:
        if k == len(order):
            return all(Q.faces.get(frozenset(mapping[i] for i in T)) == d for T, d in P.faces.items())
        s = order[k]
        for q in range(Q.size):
            if q in used or sq[q] != sp[s]:
                continue
            if any(pair_prof(pp, s, a) != pair_prof(pq, q, mapping[a]) for a in mapping):
                continue
            mapping[s] = q
            used.add(q)
            if extend(k + 1):
                return True
            del mapping[s]
            used.discard(q)
        return False

    if extend(0):
        return True, dict(mapping)
    return False, None


# -- dihedral angles ----------------------------------------------------------

# cos^2 values of angles pi/m with rational cos^2
_KNOWN_ANGLES = {
    Fraction(0): Fraction(1, 2),
    Fraction(1, 4): Fraction(1, 3),
    Fraction(1, 2): Fraction(1, 4),
    Fraction(3, 4): Fraction(1, 6),
    Fraction(1): Fraction(0),
}


@dataclass(frozen=True)
class AngleRecord:
    pair: tuple
    cos2: object | None  # None when the product is >= 4
    infinite: bool

    @property
    def angle_over_pi(self) -> Fraction | None:
        """The angle in units of pi when cos^2 is one of 0, 1/4, 1/2, 3/4, 1."""
        if self.infinite:
            return Fraction(0)
        if isinstance(self.cos2, Fraction):
            return _KNOWN_ANGLES.get(self.cos2)
        return None

    def to_json(self) -> dict:
        out = {"pair": list(self.pair), "infinite": self.infinite}
        if self.cos2 is not None:
            out["cos2"] = to_text(self.cos2)
        a = self.angle_over_pi
        if a is not None:
            out["angle"] = f"{a}*pi"
        return out


def dihedral_angles(A: CartanMatrix) -> list[AngleRecord]:
    out = []
    for i, j in itertools.combinations(range(A.size), 2):
        prod = A[i, j] * A[j, i]
        if isinstance(prod, TowerElement) and prod.is_rational():
            prod = prod.to_fraction()
        pair = (A.labels[i], A.labels[j])
        if isinstance(prod, RationalFunction):
            out.append(AngleRecord(pair, prod / 4, False))
        elif scalar_sign(prod - 4) >= 0:
            out.append(AngleRecord(pair, None, True))
        else:
            out.append(AngleRecord(pair, prod / 4, False))
    return out


def angle_table(A: CartanMatrix) -> dict:
    return {frozenset(r.pair): r for r in dihedral_angles(A)}
