"""Coxeter systems: diagram classification, spherical group orders, the
Moussong-Caprace relative hyperbolicity test and orbifold Euler characteristics."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match

from .cartan import CartanMatrix
from .exactnum import TowerElement
from .exactnum.matrix import scalar_sign

INF = math.inf
MAX_GENERATORS = 16


class CoxeterError(ValueError):
    pass


def _label_text(m) -> str:
    return "inf" if m == INF else str(m)


@dataclass(frozen=True)
class CoxeterSystem:
    generators: tuple
    M: tuple  # symmetric; M[s][s] = 1; other entries int >= 2 or INF

    def __post_init__(self):
        n = len(self.generators)
        M = tuple(tuple(row) for row in self.M)
        object.__setattr__(self, "M", M)
        if len(M) != n or any(len(r) != n for r in M):
            raise CoxeterError("label matrix shape does not match generators")
        for i in range(n):
            if M[i][i] != 1:
                raise CoxeterError("diagonal labels must be 1")
            for j in range(n):
                if i != j:
                    if M[i][j] != M[j][i]:
                        raise CoxeterError("label matrix must be symmetric")
                    if not (M[i][j] == INF or (isinstance(M[i][j], int) and M[i][j] >= 2)):
                        raise CoxeterError(f"bad label {M[i][j]!r}")

    @property
    def size(self) -> int:
        return len(self.generators)

    def index(self, name) -> int:
        return self.generators.index(name)

    def label(self, a, b):
        return self.M[self.index(a)][self.index(b)]

    def subgroup(self, T) -> "CoxeterSystem":
        """Restriction to T, given as indices or generator names, in generator order."""
        idx = sorted(self.index(x) if not isinstance(x, int) else x for x in T)
        return CoxeterSystem(
            tuple(self.generators[i] for i in idx),
            tuple(tuple(self.M[i][j] for j in idx) for i in idx),
        )

    def components(self) -> list[tuple[int, ...]]:
        n = self.size
        seen = set()
        out = []
        for s in range(n):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if j not in seen and self.M[i][j] != 2 and i != j:
                        seen.add(j)
                        stack.append(j)
            out.append(tuple(sorted(comp)))
        return out

    def permuted(self, perm) -> "CoxeterSystem":
        """Relabel: generator i moves to position perm[i]."""
        n = self.size
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        return CoxeterSystem(
            tuple(self.generators[inv[i]] for i in range(n)),
            tuple(tuple(self.M[inv[i]][inv[j]] for j in range(n)) for i in range(n)),
        )


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class ComponentVerdict:
    kind: str  # spherical | affine | other
    tag: str | None
    rank: int

    def to_json(self) -> dict:
        return {"kind": self.kind, "tag": self.tag, "rank": self.rank}


def _graph(edges, n) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for a, b, m in edges:
        g.add_edge(a, b, label=m)
    return g


def _path(labels) -> list:
    return [(i, i + 1, m) for i, m in enumerate(labels)]


def _spherical_templates(n: int):
    out = [(f"A{n}", _path([3] * (n - 1)))]
    if n == 2:
        out.append(("B2", _path([4])))
    if n >= 3:
        out.append((f"B{n}", _path([3] * (n - 2) + [4])))
    if n >= 4:
        out.append((f"D{n}", _path([3] * (n - 2)) + [(n - 3, n - 1, 3)]))
    if n == 3:
        out.append(("H3", _path([5, 3])))
    if n == 4:
        out.append(("H4", _path([5, 3, 3])))
        out.append(("F4", _path([3, 4, 3])))
    if n in (6, 7, 8):
        out.append((f"E{n}", _path([3] * (n - 2)) + [(2, n - 1, 3)]))
    return out


def _affine_templates(n: int):
    """Templates on n nodes; the affine rank is n - 1 in the usual indexing."""
    k = n - 1
    out = []
    if n == 2:
        out.append(("~A1", [(0, 1, INF)]))
    if n >= 3:
        out.append((f"~A{k}", _path([3] * (n - 1)) + [(n - 1, 0, 3)]))
    if n == 3:
        out.append(("~B2", _path([4, 4])))
        out.append(("~G2", _path([6, 3])))
    if n >= 4:
        # fork of two leaves (0, n-1) on node 1, a 4 at the far end
        out.append((f"~B{k}", _path([3] * (n - 3) + [4]) + [(1, n - 1, 3)]))
        out.append((f"~C{k}", _path([4] + [3] * (n - 3) + [4])))
    if n >= 5:
        # forks at both ends
        out.append((f"~D{k}", _path([3] * (n - 3)) + [(1, n - 2, 3), (n - 4, n - 1, 3)]))
    if n == 5:
        out.append(("~F4", _path([3, 3, 4, 3])))
    if n == 7:
        out.append(("~E6", _path([3] * 4) + [(2, 5, 3), (5, 6, 3)]))
    if n == 8:
        out.append(("~E7", _path([3] * 6) + [(3, 7, 3)]))
    if n == 9:
        out.append(("~E8", _path([3] * 7) + [(2, 8, 3)]))
    return out


@lru_cache(maxsize=None)
def _templates(n: int):
    out = []
    for kind, temps in (("spherical", _spherical_templates(n)), ("affine", _affine_templates(n))):
        for tag, edges in temps:
            g = _graph(edges, n)
            out.append((kind, tag, g, _invariant(g)))
    return out


def _invariant(g: nx.Graph):
    labels = sorted((d["label"] for _, _, d in g.edges(data=True)), key=lambda m: (m == INF, m))
    return (g.number_of_nodes(), tuple(labels), tuple(sorted(d for _, d in g.degree())))


_match = categorical_edge_match("label", None)


def _diagram(M, idx) -> nx.Graph:
    edges = []
    for a, b in itertools.combinations(range(len(idx)), 2):
        m = M[idx[a]][idx[b]]
        if m != 2:
            edges.append((a, b, m))
    return _graph(edges, len(idx))


def _classify_graph(g: nx.Graph) -> ComponentVerdict:
    n = g.number_of_nodes()
    if n == 1:
        return ComponentVerdict("spherical", "A1", 1)
    if n == 2:
        m = next(iter(g.edges(data=True)))[2]["label"]
        if m == INF:
            return ComponentVerdict("affine", "~A1", 2)
        return ComponentVerdict("spherical", {3: "A2", 4: "B2"}.get(m, f"I2({m})"), 2)
    # every diagram in the tables on 3+ nodes is a tree or a single cycle with finite labels
    if g.number_of_edges() > n:
        return ComponentVerdict("other", None, n)
    if any(d["label"] == INF for _, _, d in g.edges(data=True)):
        return ComponentVerdict("other", None, n)
    inv = _invariant(g)
    for kind, tag, tg, tinv in _templates(n):
        if tinv == inv and nx.is_isomorphic(g, tg, edge_match=_match):
            return ComponentVerdict(kind, tag, n)
    return ComponentVerdict("other", None, n)


def classify_component(sys: CoxeterSystem) -> ComponentVerdict:
    if sys.size == 0 or len(sys.components()) != 1:
        raise CoxeterError("classify_component needs a connected diagram")
    return _classify_graph(_diagram(sys.M, list(range(sys.size))))


@dataclass(frozen=True)
class ClassificationVerdict:
    components: tuple  # ((generator names), ComponentVerdict)

    @property
    def spherical(self) -> bool:
        return all(v.kind == "spherical" for _, v in self.components)

    @property
    def affine(self) -> bool:
        return bool(self.components) and all(v.kind == "affine" for _, v in self.components)

    def tags(self) -> list:
        return [v.tag for _, v in self.components]

    def to_json(self) -> dict:
        return {
            "components": [{"generators": list(c), **v.to_json()} for c, v in self.components]
        }


def classify(sys: CoxeterSystem) -> ClassificationVerdict:
    out = []
    for comp in sys.components():
        sub = sys.subgroup(comp)
        out.append((sub.generators, classify_component(sub)))
    return ClassificationVerdict(tuple(out))


def _tag_order(tag: str) -> int:
    if tag.startswith("I2("):
        return 2 * int(tag[3:-1])
    fam, n = tag[0], int(tag[1:])
    if fam == "A":
        return math.factorial(n + 1)
    if fam == "B":
        return 2 ** n * math.factorial(n)
    if fam == "D":
        return 2 ** (n - 1) * math.factorial(n)
    fixed = {"H3": 120, "H4": 14400, "F4": 1152, "E6": 51840, "E7": 2903040, "E8": 696729600}
    return fixed[tag]


def spherical_order(sys: CoxeterSystem) -> int:
    order = 1
    for _, v in classify(sys).components:
        if v.kind != "spherical":
            raise CoxeterError(f"component of type {v.tag or v.kind} is not spherical")
        order *= _tag_order(v.tag)
    return order


# -- the W_p system and its peripheral collection -----------------------------

PRIMED = tuple(f"{i}'" for i in range(1, 6))
UNPRIMED = tuple(str(i) for i in range(1, 6))


def w_p(p: int) -> CoxeterSystem:
    """Primed pairs labelled p, unprimed pairs 3, i'-i labelled inf, the rest 2."""
    if p < 3:
        raise CoxeterError("p must be at least 3")
    M = [[2] * 10 for _ in range(10)]
    for i in range(10):
        M[i][i] = 1
    for i, j in itertools.combinations(range(5), 2):
        M[i][j] = M[j][i] = p
        M[5 + i][5 + j] = M[5 + j][5 + i] = 3
    for i in range(5):
        M[i][5 + i] = M[5 + i][i] = INF
    return CoxeterSystem(PRIMED + UNPRIMED, tuple(map(tuple, M)))


def t_collection(p: int) -> list[frozenset]:
    """Index sets {i', j', k, l, m}; for p = 3 also {i', j', k', l, m}."""
    if p < 3:
        raise CoxeterError("p must be at least 3")
    out = []
    for i, j in itertools.combinations(range(5), 2):
        out.append(frozenset({i, j} | {5 + k for k in range(5) if k not in (i, j)}))
    if p == 3:
        for i, j, k in itertools.combinations(range(5), 3):
            out.append(frozenset({i, j, k} | {5 + l for l in range(5) if l not in (i, j, k)}))
    return out


# -- relative hyperbolicity ---------------------------------------------------


@dataclass(frozen=True)
class CapraceResult:
    ok: bool
    condition: int | None = None
    witnesses: tuple = ()
    names: tuple = ()

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        if self.ok:
            return {"result": "ok"}
        return {
            "result": "violation",
            "condition": self.condition,
            "witnesses": [list(w) for w in self.names],
        }


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


class _SubsetTable:
    """Per-subset data for all 2^n subsets of the generators."""

    def __init__(self, sys: CoxeterSystem):
        n = sys.size
        self.sys = sys
        self.n = n
        self.nbr = [sum(1 << j for j in range(n) if j != i and sys.M[i][j] != 2) for i in range(n)]
        self.orth = [sum(1 << j for j in range(n) if j != i and sys.M[i][j] == 2) for i in range(n)]
        self._verdict: dict[int, ComponentVerdict] = {}
        self._spherical: dict[int, bool] = {0: True}

    def connected(self, mask: int) -> bool:
        if mask == 0:
            return False
        low = mask & -mask
        seen = low
        frontier = low
        while frontier:
            nxt = 0
            for i in _bits(frontier):
                nxt |= self.nbr[i]
            nxt &= mask & ~seen
            seen |= nxt
            frontier = nxt
        return seen == mask

    def components(self, mask: int) -> list[int]:
        out = []
        rest = mask
        while rest:
            low = rest & -rest
            seen = frontier = low
            while frontier:
                nxt = 0
                for i in _bits(frontier):
                    nxt |= self.nbr[i]
                nxt &= rest & ~seen
                seen |= nxt
                frontier = nxt
            out.append(seen)
            rest &= ~seen
        return out

    def verdict(self, mask: int) -> ComponentVerdict:
        """Verdict of a connected subset."""
        if mask not in self._verdict:
            self._verdict[mask] = _classify_graph(_diagram(self.sys.M, _bits(mask)))
        return self._verdict[mask]

    def spherical(self, mask: int) -> bool:
        if mask not in self._spherical:
            self._spherical[mask] = all(self.verdict(c).kind == "spherical" for c in self.components(mask))
        return self._spherical[mask]

    def perp(self, mask: int) -> int:
        out = (1 << self.n) - 1
        for i in _bits(mask):
            out &= self.orth[i]
        return out


def caprace_check(sys: CoxeterSystem, collection) -> CapraceResult:
    """Moussong-Caprace criterion, all four conditions by enumeration.

    ``collection`` holds subsets given as index sets.
    """
    n = sys.size
    if n > MAX_GENERATORS:
        raise CoxeterError(f"at most {MAX_GENERATORS} generators")
    tab = _SubsetTable(sys)
    T = sorted({sum(1 << i for i in c) for c in collection})
    names = lambda *masks: tuple(tuple(sys.generators[i] for i in _bits(m)) for m in masks)  # noqa: E731
    # subsets ordered by size then by the sorted index list, for stable witnesses
    all_masks = sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), _bits(m)))
    irred_nonsph = []
    for m in all_masks:
        if not tab.connected(m):
            continue
        v = tab.verdict(m)
        if v.kind == "spherical":
            continue
        irred_nonsph.append(m)
        if v.kind == "affine" and bin(m).count("1") >= 3:
            if not any(m & t == m for t in T):
                return CapraceResult(False, 1, (m,), names(m))
    # 2: orthogonal pairs of irreducible non-spherical subsets
    nonsph = set(irred_nonsph)
    for a in irred_nonsph:
        pa = tab.perp(a)
        for b in irred_nonsph:
            if b & pa == b and b > a and b in nonsph:
                u = a | b
                if not any(u & t == u for t in T):
                    return CapraceResult(False, 2, (a, b), names(a, b))
    # 3: pairwise intersections spherical
    for t1, t2 in itertools.combinations(T, 2):
        if not tab.spherical(t1 & t2):
            return CapraceResult(False, 3, (t1, t2), names(t1, t2))
    # 4: U^perp inside T for irreducible non-spherical U inside T
    for t in T:
        for u in irred_nonsph:
            if u & t == u and tab.perp(u) & t != tab.perp(u):
                return CapraceResult(False, 4, (t, u), names(t, u))
    return CapraceResult(True)


# -- orbifold Euler characteristic ---------------------------------------------


def orbifold_euler(poset, sys: CoxeterSystem) -> Fraction:
    """Sum of (-1)^dim / |W_T| over faces T with spherical W_T.

    Faces with a non-spherical group (ideal vertices) are left out.
    """
    if poset.size != sys.size:
        raise CoxeterError("poset and Coxeter system need the same facets")
    total = Fraction(0)
    for T, d in poset.faces.items():
        sub = sys.subgroup(sorted(T))
        if not classify(sub).spherical:
            continue
        total += Fraction((-1) ** d, spherical_order(sub))
    return total


# -- from a Cartan matrix -------------------------------------------------------

_PRODUCT_LABELS = {Fraction(0): 2, Fraction(1): 3, Fraction(2): 4, Fraction(3): 6}


def coxeter_from_cartan(A: CartanMatrix, fallback: dict | None = None) -> CoxeterSystem:
    """Labels read off products A_st A_ts = 4 cos^2(pi/m); products >= 4 give inf.

    Products that are not 0, 1, 2, 3 and below 4 are looked up in ``fallback``
    keyed by the pair of indices, else an error is raised.
    """
    n = A.size
    M = [[1] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        prod = A[i, j] * A[j, i]
        if isinstance(prod, TowerElement) and prod.is_rational():
            prod = prod.to_fraction()
        if isinstance(prod, Fraction) and prod in _PRODUCT_LABELS:
            m = _PRODUCT_LABELS[prod]
        elif scalar_sign(prod - 4) >= 0:
            m = INF
        elif fallback and (i, j) in fallback:
            m = fallback[i, j]
        else:
            raise CoxeterError(f"product at ({A.labels[i]}, {A.labels[j]}) is not a Coxeter angle")
        M[i][j] = M[j][i] = m
    return CoxeterSystem(A.labels, tuple(map(tuple, M)))


# -- file format --------------------------------------------------------------


def format_coxeter_file(sys: CoxeterSystem) -> str:
    lines = ["generators " + " ".join(sys.generators)]
    for i in range(sys.size - 1):
        lines.append(" ".join(_label_text(sys.M[i][j]) for j in range(i + 1, sys.size)))
    return "\n".join(lines) + "\n"


def parse_coxeter_file(text: str) -> CoxeterSystem:
    gens = None
    labels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("generators"):
            gens = tuple(line.split()[1:])
            continue
        if gens is None:
            raise CoxeterError(f"line {lineno}: generators line must come first")
        for tok in line.split():
            if tok.lower() in ("inf", "infinity", "∞"):
                labels.append(INF)
            else:
                try:
                    labels.append(int(tok))
                except ValueError:
                    raise CoxeterError(f"line {lineno}: bad label {tok!r}") from None
    if gens is None:
        raise CoxeterError("missing generators line")
    n = len(gens)
    if len(labels) != n * (n - 1) // 2:
        raise CoxeterError(f"expected {n * (n - 1) // 2} labels, got {len(labels)}")
    M = [[1] * n for _ in range(n)]
    it = iter(labels)
    for i in range(n):
        for j in range(i + 1, n):
            M[i][j] = M[j][i] = next(it)
    return CoxeterSystem(gens, tuple(map(tuple, M)))
