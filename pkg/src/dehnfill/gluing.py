"""Gluing copies of the bitruncated 4-simplex along edge-coloured complete
graphs: the block B, the closed complex X' and its orientation cover X.

A face of a cell is named by its facet subset T in the reference poset.
A rule (u, v, s) glues facet s of cell u to facet s of cell v by the
identity, so (u, T) ~ (v, T) for every face T containing s.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
from networkx.utils import UnionFind

from .vinberg import FacePoset, reference_poset


class StructuralError(ValueError):
    pass


class ColoringError(ValueError):
    pass


def primed_index(i: int) -> int:
    """Facet index of F'_i in the reference labelling (i = 1..5)."""
    return i - 1


def unprimed_index(i: int) -> int:
    return 4 + i


# -- edge-coloured complete graphs ---------------------------------------------


@dataclass(frozen=True)
class EdgeColoring:
    """Proper edge colouring of K_n with colours 1..n-1."""

    n: int
    edges: tuple  # ((u, v, label), ...) with u < v

    def __post_init__(self):
        n = self.n
        seen = {}
        for u, v, lab in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ColoringError(f"bad edge ({u}, {v})")
            if not 1 <= lab <= n - 1:
                raise ColoringError(f"label {lab} outside 1..{n - 1}")
            key = frozenset((u, v))
            if key in seen:
                raise ColoringError(f"edge ({u}, {v}) listed twice")
            seen[key] = lab
        if len(seen) != n * (n - 1) // 2:
            raise ColoringError(f"expected {n * (n - 1) // 2} edges, got {len(seen)}")
        for w in range(n):
            labs = [lab for (u, v, lab) in self.edges if w in (u, v)]
            if len(set(labs)) != len(labs):
                raise ColoringError(f"two edges at node {w} share a label")
        canon = tuple(sorted((min(u, v), max(u, v), lab) for u, v, lab in self.edges))
        object.__setattr__(self, "edges", canon)

    @property
    def labels(self) -> range:
        return range(1, self.n)

    def matching(self, label: int) -> list[tuple[int, int]]:
        return [(u, v) for u, v, lab in self.edges if lab == label]

    def relabeled(self, perm: dict) -> "EdgeColoring":
        """Permute colours by perm (label -> label)."""
        return EdgeColoring(self.n, tuple((u, v, perm[lab]) for u, v, lab in self.edges))

    def renamed(self, nodes) -> "EdgeColoring":
        """Permute nodes: node w becomes nodes[w]."""
        return EdgeColoring(self.n, tuple((nodes[u], nodes[v], lab) for u, v, lab in self.edges))

    def is_perfect(self) -> bool:
        return all(
            pair_union_cycles(self, i, j) == [self.n] for i, j in itertools.combinations(self.labels, 2)
        )


def EdgeLabeledK6(edges) -> EdgeColoring:
    return EdgeColoring(6, tuple(edges))


def default_k6() -> EdgeColoring:
    """The classical perfect 1-factorization of K6 on Z5 plus a point at infinity.

    Matching i (label i + 1) is {inf, i} together with {i - k, i + k} for k = 1, 2;
    node 5 plays the point at infinity.
    """
    edges = []
    for i in range(5):
        edges.append((i, 5, i + 1))
        for k in (1, 2):
            edges.append(((i - k) % 5, (i + k) % 5, i + 1))
    g = EdgeColoring(6, tuple(edges))
    if not g.is_perfect():
        raise ColoringError("default colouring is not perfect")
    return g


def pair_union_cycles(g: EdgeColoring, i: int, j: int) -> list[int]:
    """Cycle lengths of the union of matchings i and j, sorted."""
    if i == j:
        raise ValueError("need two distinct labels")
    G = nx.MultiGraph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.matching(i) + g.matching(j))
    return sorted(len(c) for c in nx.connected_components(G))


def affine_k8() -> EdgeColoring:
    """K8 on F_2^3 coloured by the difference vector: not perfect (all unions are 4-cycles)."""
    edges = [(u, v, u ^ v) for u, v in itertools.combinations(range(8), 2)]
    return EdgeColoring(8, tuple(edges))


def all_k6_colorings():
    """Every proper 5-edge-colouring of K6 with node 0's edge to w labelled by w
    (a normalization that fixes the colour names)."""
    pairs = list(itertools.combinations(range(6), 2))
    fixed = {(0, w): w for w in range(1, 6)}
    rest = [e for e in pairs if e[0] != 0]

    def extend(k, assign):
        if k == len(rest):
            yield EdgeColoring(6, tuple((u, v, assign[u, v]) for u, v in pairs))
            return
        u, v = rest[k]
        used = {lab for (a, b), lab in assign.items() if a in (u, v) or b in (u, v)}
        for lab in range(1, 6):
            if lab not in used:
                assign[u, v] = lab
                yield from extend(k + 1, assign)
                del assign[u, v]

    yield from extend(0, dict(fixed))


def format_k6_file(g: EdgeColoring) -> str:
    return "".join(f"{u} {v} {lab}\n" for u, v, lab in g.edges)


def parse_k6_file(text: str) -> EdgeColoring:
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ColoringError(f"line {lineno}: expected 'u v label'")
        try:
            edges.append(tuple(int(x) for x in parts))
        except ValueError:
            raise ColoringError(f"line {lineno}: non-integer field") from None
    g = EdgeColoring(6, tuple(edges))
    for i, j in itertools.combinations(g.labels, 2):
        if pair_union_cycles(g, i, j) != [6]:
            raise ColoringError(f"labels {i} and {j} do not form a single 6-cycle")
    return g


# -- glued complexes ------------------------------------------------------------


@dataclass
class GluedComplex:
    tags: list  # per-cell provenance tuples
    poset: FacePoset
    rules: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        self._glued: dict[tuple[int, int], int] = {}
        self._classes = None

    @property
    def n_cells(self) -> int:
        return len(self.tags)

    def glue(self, u: int, v: int, s: int) -> None:
        if u == v:
            raise StructuralError(f"cell {u} glued to itself along facet {s}")
        for side in ((u, s), (v, s)):
            if side in self._glued:
                raise StructuralError(f"facet side {side} glued twice")
        self._glued[u, s] = v
        self._glued[v, s] = u
        self.rules.append((u, v, s))
        self._classes = None

    def partner(self, c: int, s: int) -> int | None:
        return self._glued.get((c, s))

    def unglued(self) -> list[tuple[int, int]]:
        return [
            (c, s) for c in range(self.n_cells) for s in range(self.poset.size) if (c, s) not in self._glued
        ]

    def is_closed(self) -> bool:
        return not self.unglued()

    # face classes

    def _build_classes(self):
        faces = list(self.poset.faces)
        containing = defaultdict(list)
        for T in faces:
            for s in T:
                containing[s].append(T)
        uf = UnionFind((c, T) for c in range(self.n_cells) for T in faces)
        for u, v, s in self.rules:
            for T in containing[s]:
                uf.union((u, T), (v, T))
        groups = defaultdict(list)
        for key in uf:
            groups[uf[key]].append(key)
        classes = []
        index = {}
        for members in sorted(groups.values(), key=lambda m: min((c, sorted(T)) for c, T in m)):
            members.sort(key=lambda m: (m[0], sorted(m[1])))
            cid = len(classes)
            classes.append(tuple(members))
            for m in members:
                index[m] = cid
        self._classes = (classes, index)

    def classes(self) -> list[tuple]:
        if self._classes is None:
            self._build_classes()
        return self._classes[0]

    def class_of(self, c: int, T) -> int:
        if self._classes is None:
            self._build_classes()
        return self._classes[1][c, frozenset(T)]

    def class_dim(self, cid: int) -> int:
        return self.poset.faces[self.classes()[cid][0][1]]

    def class_subset(self, cid: int) -> frozenset:
        return self.classes()[cid][0][1]

    def counts_by_dim(self) -> dict[int, int]:
        out = Counter(self.class_dim(k) for k in range(len(self.classes())))
        return {d: out.get(d, 0) for d in range(self.poset.dimension + 1)}

    def adjacency_graph(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(range(self.n_cells))
        for u, v, s in self.rules:
            G.add_edge(u, v, facet=s)
        return G

    def is_connected(self) -> bool:
        return nx.is_connected(self.adjacency_graph())

    def is_orientable(self) -> bool:
        """Identity gluings reverse the induced orientation, so orientable
        iff the cell adjacency graph is bipartite."""
        return nx.is_bipartite(self.adjacency_graph())


def single_cell(poset: FacePoset | None = None) -> GluedComplex:
    return GluedComplex([("cell", 0)], poset or reference_poset("bitruncated"))


def build_block(g: EdgeColoring) -> GluedComplex:
    """Six cells, one per node; an edge of label i glues the F_i facets."""
    C = GluedComplex([("block", w) for w in range(g.n)], reference_poset("bitruncated"))
    for u, v, lab in g.edges:
        C.glue(u, v, unprimed_index(lab))
    return C


def build_xprime(g_outer: EdgeColoring, g_inner: EdgeColoring) -> GluedComplex:
    """36 cells (U, c); inner edges glue F_i inside each block, outer edges glue
    F'_i between cells with equal inner node."""
    n_out, n_in = g_outer.n, g_inner.n
    tags = [("xprime", U, c) for U in range(n_out) for c in range(n_in)]
    C = GluedComplex(tags, reference_poset("bitruncated"))
    cell = lambda U, c: U * n_in + c  # noqa: E731
    for U in range(n_out):
        for c, d, lab in g_inner.edges:
            C.glue(cell(U, c), cell(U, d), unprimed_index(lab))
    for U, V, lab in g_outer.edges:
        for c in range(n_in):
            C.glue(cell(U, c), cell(V, c), primed_index(lab))
    return C


def orientation_double_cover(C: GluedComplex) -> GluedComplex:
    if not C.is_closed():
        raise StructuralError("the orientation cover needs a closed complex")
    tags = [tag + (sign,) for tag in C.tags for sign in ("+", "-")]
    D = GluedComplex(tags, C.poset)
    for u, v, s in C.rules:
        D.glue(2 * u, 2 * v + 1, s)
        D.glue(2 * u + 1, 2 * v, s)
    if C.is_orientable():
        D.notes.append("base is orientable: the cover is two disjoint copies")
    return D


def euler_characteristic(C: GluedComplex) -> int:
    return sum((-1) ** d * k for d, k in C.counts_by_dim().items())


def covering_consistency(C: GluedComplex, chi_orb, degree: int) -> bool:
    return Fraction(euler_characteristic(C)) == degree * Fraction(chi_orb)


def boundary_components(C: GluedComplex) -> list[list[tuple[int, int]]]:
    """Unglued facet sides, grouped: two sides are adjacent when they lie on
    different members of one ridge class."""
    sides = C.unglued()
    side_set = set(sides)
    G = nx.Graph()
    G.add_nodes_from(sides)
    for cid, members in enumerate(C.classes()):
        if C.class_dim(cid) != C.poset.dimension - 2 or len(members) < 2:
            continue
        on_boundary = [[(c, s) for s in T if (c, s) in side_set] for c, T in members]
        for a, b in itertools.combinations(range(len(members)), 2):
            for x in on_boundary[a]:
                for y in on_boundary[b]:
                    G.add_edge(x, y)
    comps = [sorted(c) for c in nx.connected_components(G)]
    return sorted(comps)


# -- ridges ---------------------------------------------------------------------


def ridge_type(T, n_primed: int = 5) -> str:
    primed = sum(1 for s in T if s < n_primed)
    return {2: "filling", 0: "unprimed", 1: "mixed"}[primed]


@dataclass(frozen=True)
class RidgeRecord:
    class_id: int
    subset: tuple
    kind: str
    incidence: int
    angle_over_pi: Fraction | None  # dihedral angle of one copy, when known
    cos2: object | None

    @property
    def angle_sum_over_pi(self) -> Fraction | None:
        return None if self.angle_over_pi is None else self.incidence * self.angle_over_pi


def ridge_report(C: GluedComplex, angles: dict | None = None) -> list[RidgeRecord]:
    """Per ridge class: type, number of incident cells, and angle sum.

    ``angles`` maps frozenset({s, t}) of facet indices to vinberg AngleRecords.
    """
    if not C.is_closed():
        raise StructuralError("ridge_report needs a closed complex")
    out = []
    for cid, members in enumerate(C.classes()):
        if C.class_dim(cid) != C.poset.dimension - 2:
            continue
        T = members[0][1]
        rec = angles.get(T) if angles else None
        out.append(
            RidgeRecord(
                cid,
                tuple(sorted(T)),
                ridge_type(T),
                len(members),
                rec.angle_over_pi if rec else None,
                rec.cos2 if rec else None,
            )
        )
    return out


def angle_map(A) -> dict:
    """frozenset of facet indices -> AngleRecord, from a Cartan matrix."""
    from .vinberg import dihedral_angles

    idx = {lab: i for i, lab in enumerate(A.labels)}
    return {frozenset(idx[x] for x in r.pair): r for r in dihedral_angles(A)}


# -- surfaces -------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceReport:
    orbit: int
    triangles: int  # distinct 2-face classes
    incidences: int  # (cell, ridge) pairs
    vertices: int
    edges: int
    euler: int
    orientable: bool

    @property
    def classification(self) -> str:
        if self.euler == 0:
            return "torus" if self.orientable else "Klein bottle"
        if self.euler == 2 and self.orientable:
            return "sphere"
        return "other"

    def to_json(self) -> dict:
        return {
            "orbit": self.orbit,
            "triangles": self.triangles,
            "incidences": self.incidences,
            "V": self.vertices,
            "E": self.edges,
            "F": self.triangles,
            "euler": self.euler,
            "orientable": self.orientable,
            "classification": self.classification,
        }


def _surface_orbits(C: GluedComplex, kind: str) -> list[SurfaceReport]:
    if not C.is_closed():
        raise StructuralError("surface analysis needs a closed complex")
    ridge_dim = C.poset.dimension - 2
    tri = [cid for cid in range(len(C.classes())) if C.class_dim(cid) == ridge_dim
           and ridge_type(C.class_subset(cid)) == kind]
    faces_of = {}
    for cid in tri:
        T = C.class_subset(cid)
        c = C.classes()[cid][0][0]
        edges = [U for U, d in C.poset.faces.items() if d == ridge_dim - 1 and T < U]
        verts = [U for U, d in C.poset.faces.items() if d == 0 and T < U]
        faces_of[cid] = (
            {C.class_of(c, U) for U in edges},
            {C.class_of(c, U) for U in verts},
        )
    by_edge = defaultdict(list)
    for cid in tri:
        for e in faces_of[cid][0]:
            by_edge[e].append(cid)
    G = nx.Graph()
    G.add_nodes_from(tri)
    for e, ts in by_edge.items():
        if len(ts) != 2:
            raise StructuralError(f"edge class {e} bounds {len(ts)} triangles of type {kind}")
        G.add_edge(*ts)
    reports = []
    for k, comp in enumerate(sorted((sorted(c) for c in nx.connected_components(G)))):
        E = set().union(*(faces_of[t][0] for t in comp))
        V = set().union(*(faces_of[t][1] for t in comp))
        F = len(comp)
        reports.append(
            SurfaceReport(
                k,
                F,
                sum(len(C.classes()[t]) for t in comp),
                len(V),
                len(E),
                len(V) - len(E) + F,
                nx.is_bipartite(G.subgraph(comp)),
            )
        )
    return reports


def sigma_analysis(C: GluedComplex) -> list[SurfaceReport]:
    """Surfaces swept out by filling ridges {i', j'}."""
    return _surface_orbits(C, "filling")


def tprime_analysis(C: GluedComplex) -> list[SurfaceReport]:
    """Surfaces swept out by unprimed ridges {i, j}."""
    return _surface_orbits(C, "unprimed")


# -- vertex links ---------------------------------------------------------------


@dataclass
class LinkReport:
    vertex_classes: int
    closed: int
    with_boundary: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def require(self) -> "LinkReport":
        if self.failures:
            f = self.failures[0]
            raise StructuralError(f"vertex class {f['vertex_class']}: {f['reason']}")
        return self

    def to_json(self) -> dict:
        return {
            "vertex_classes": self.vertex_classes,
            "sphere_like": self.closed,
            "disc_like": self.with_boundary,
            "failures": self.failures,
        }


def vertex_link_check(C: GluedComplex, allow_boundary: bool = False) -> LinkReport:
    """Each vertex link must be a connected 3-pseudomanifold whose vertex
    links are 2-spheres (or, with boundary allowed, discs)."""
    P = C.poset
    n = P.dimension
    vertices = P.of_dim(0)
    # link simplices of the corner (c, V) are faces T of c strictly inside V
    below = {V: [T for T in P.faces if T < V] for V in vertices}
    uf = UnionFind((c, T, V) for c in range(C.n_cells) for V in vertices for T in below[V])
    for u, v, s in C.rules:
        for V in vertices:
            if s not in V:
                continue
            for T in below[V]:
                if s in T:
                    uf.union((u, T, V), (v, T, V))
    failures = []
    closed = bounded = 0
    vclasses = [cid for cid in range(len(C.classes())) if C.class_dim(cid) == 0]
    for vid in vclasses:
        corners = C.classes()[vid]  # members (c, V)
        simplices = defaultdict(set)  # link dimension -> class roots
        tris = defaultdict(list)
        for c, V in corners:
            for T in below[V]:
                root = uf[(c, T, V)]
                d = n - 1 - len(T)
                simplices[d].add(root)
                if len(T) == 1:
                    tris[root].append(c)
        bad_tri = [r for r, cs in tris.items() if len(cs) not in (1, 2)]
        open_tri = [r for r, cs in tris.items() if len(cs) == 1]
        if bad_tri:
            failures.append({"vertex_class": vid, "reason": "link triangle in more than two tetrahedra"})
            continue
        if open_tri and not allow_boundary:
            failures.append({"vertex_class": vid, "reason": "link has an unmatched triangle (dangling facet)"})
            continue
        # connectivity through shared triangles
        G = nx.Graph()
        G.add_nodes_from(range(len(corners)))
        owner = defaultdict(list)
        for k, (c, V) in enumerate(corners):
            for T in below[V]:
                if len(T) == 1:
                    owner[uf[(c, T, V)]].append(k)
        for ks in owner.values():
            for a, b in zip(ks, ks[1:]):
                G.add_edge(a, b)
        if not nx.is_connected(G):
            failures.append({"vertex_class": vid, "reason": "link is disconnected"})
            continue
        # link of each link vertex (an edge T of size n - 1 inside V)
        ok = True
        lv_members = defaultdict(list)
        for c, V in corners:
            for T in below[V]:
                if len(T) == n - 1:
                    lv_members[uf[(c, T, V)]].append((c, T, V))
        boundary_link = False
        for root, members in lv_members.items():
            F = len(members)
            E, Vx = set(), set()
            edge_use = Counter()
            for c, T, V in members:
                for s in T:
                    e = uf[(c, frozenset([s]), V)]
                    E.add(e)
                    edge_use[e] += 1
                for pair in itertools.combinations(sorted(T), 2):
                    Vx.add(uf[(c, frozenset(pair), V)])
            chi = len(Vx) - len(E) + F
            if all(k == 2 for k in edge_use.values()) and chi == 2:
                continue
            if allow_boundary and all(k in (1, 2) for k in edge_use.values()) and chi == 1:
                boundary_link = True
                continue
            ok = False
            failures.append({"vertex_class": vid, "reason": f"link vertex link has euler {chi}"})
            break
        if not ok:
            continue
        if open_tri or boundary_link:
            bounded += 1
        else:
            closed += 1
    return LinkReport(len(vclasses), closed, bounded, failures)
