"""Cartan matrices: components, the positive/zero/negative trichotomy, rank,
diagonal equivalence, symmetrization and exact inertia."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .exactnum import RationalFunction, TowerElement, as_fraction, from_text, to_text
from .exactnum import matrix as mx
from .exactnum.matrix import scalar_sign


class CartanError(ValueError):
    pass


class ReducibleError(CartanError):
    """classify() needs an irreducible matrix; split it with components() first."""


class NotSymmetrizableError(CartanError):
    pass


def _domain_of(entries) -> str:
    dom = "rational"
    for row in entries:
        for x in row:
            if isinstance(x, RationalFunction):
                return "function"
            if isinstance(x, TowerElement) and not x.is_rational():
                dom = "tower"
    return dom


def _normalize(x):
    if isinstance(x, TowerElement) and x.is_rational():
        return x.to_fraction()
    if isinstance(x, RationalFunction) and x.is_constant():
        return x.num(Fraction(0))
    if isinstance(x, int):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple
    labels: tuple = ()
    domain: str = field(default="", compare=False)

    def __post_init__(self):
        rows = tuple(tuple(_normalize(x) for x in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise CartanError("matrix must be square")
        labels = tuple(self.labels) if self.labels else tuple(str(i + 1) for i in range(n))
        if len(labels) != n:
            raise CartanError("one label per row is required")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "domain", _domain_of(rows))
        for i in range(n):
            if rows[i][i] != 2:
                raise CartanError(f"diagonal entry {labels[i]} is {rows[i][i]!r}, not 2")
            for j in range(n):
                if i == j:
                    continue
                if (rows[i][j] == 0) != (rows[j][i] == 0):
                    raise CartanError(f"zero pattern not symmetric at ({labels[i]}, {labels[j]})")
                if self.is_pointwise and scalar_sign(rows[i][j]) > 0:
                    raise CartanError(f"positive off-diagonal entry at ({labels[i]}, {labels[j]})")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def is_pointwise(self) -> bool:
        return self.domain != "function"

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def rows(self):
        return [list(r) for r in self.entries]

    def restrict(self, indices: Sequence[int]) -> "CartanMatrix":
        idx = list(indices)
        return CartanMatrix(
            tuple(tuple(self.entries[i][j] for j in idx) for i in idx),
            tuple(self.labels[i] for i in idx),
        )

    def at(self, t) -> "CartanMatrix":
        """Pointwise evaluation of a function-of-t matrix."""
        from .exactnum import evaluate

        if self.is_pointwise:
            return self
        rows = tuple(
            tuple(evaluate(x, t) if isinstance(x, RationalFunction) else x for x in row)
            for row in self.entries
        )
        return CartanMatrix(rows, self.labels)

    def conjugate_by_permutation(self, perm: Sequence[int]) -> "CartanMatrix":
        """P A P^-1 for the permutation matrix sending basis e_j to e_perm[j]."""
        n = self.size
        inv = [0] * n
        for j, pj in enumerate(perm):
            inv[pj] = j
        rows = tuple(tuple(self.entries[inv[i]][inv[j]] for j in range(n)) for i in range(n))
        return CartanMatrix(rows, self.labels)


class CartanType(str, Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class TypeVerdict:
    kind: CartanType
    leading_minors: tuple
    reason: str

    def to_json(self) -> dict:
        return {
            "type": self.kind.value,
            "leading_minors": [to_text(m) for m in self.leading_minors],
            "reason": self.reason,
        }


def components(A: CartanMatrix) -> list[tuple[int, ...]]:
    """Connected components of the graph with an edge where A_ij != 0."""
    n = A.size
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        queue = deque([s])
        seen[s] = True
        while queue:
            i = queue.popleft()
            comp.append(i)
            for j in range(n):
                if not seen[j] and A.entries[i][j] != 0:
                    seen[j] = True
                    queue.append(j)
        out.append(tuple(sorted(comp)))
    return out


def is_irreducible(A: CartanMatrix) -> bool:
    return len(components(A)) == 1


def classify(A: CartanMatrix) -> TypeVerdict:
    """Vinberg type of an irreducible pointwise Cartan matrix.

    A Cartan matrix is a Z-matrix, so it is a nonsingular M-matrix (positive
    type) iff all leading principal minors are positive, and a singular
    irreducible M-matrix (zero type) iff the leading minors of orders
    1..N-1 are positive and the determinant vanishes. Anything else is
    negative type.
    """
    if not A.is_pointwise:
        raise CartanError("classify needs a point; evaluate the matrix first")
    if not is_irreducible(A):
        raise ReducibleError("matrix is reducible; classify each of components(A)")
    n = A.size
    minors = mx.leading_minors(A.rows())
    signs = [scalar_sign(m) for m in minors]
    if len(minors) == n and all(s > 0 for s in signs):
        kind, reason = CartanType.POSITIVE, "all leading principal minors positive"
    elif len(minors) == n and all(s > 0 for s in signs[:-1]) and signs[-1] == 0:
        kind, reason = CartanType.ZERO, "determinant zero, proper leading minors positive"
    else:
        k = next(i for i, s in enumerate(signs) if s <= 0)
        kind, reason = CartanType.NEGATIVE, f"leading minor of order {k + 1} is not positive"
        if k == n - 1:
            reason = "determinant negative with proper leading minors positive"
    return TypeVerdict(kind, tuple(minors), reason)


def component_types(A: CartanMatrix) -> list[tuple[tuple[int, ...], TypeVerdict]]:
    return [(c, classify(A.restrict(c))) for c in components(A)]


def rank(A) -> int:
    rows = A.rows() if isinstance(A, CartanMatrix) else A
    return mx.rank(rows)


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.equivalent


def _spanning_scales(A_rows, n, relation, root_last=True):
    """Propagate a diagonal scale along a spanning forest of the nonzero graph."""
    scale = [None] * n
    order = range(n - 1, -1, -1) if root_last else range(n)
    for root in order:
        if scale[root] is not None:
            continue
        scale[root] = Fraction(1)
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if scale[j] is None and A_rows[i][j] != 0:
                    scale[j] = relation(i, j, scale[i])
                    queue.append(j)
    return scale


def equivalent(A: CartanMatrix, B: CartanMatrix) -> Equivalence:
    """Is A = D B D^-1 for a positive diagonal D? Returns D when it is."""
    if A.size != B.size:
        raise CartanError("sizes differ")
    n = A.size
    a, b = A.entries, B.entries
    for i in range(n):
        for j in range(n):
            if (a[i][j] == 0) != (b[i][j] == 0):
                return Equivalence(False, reason=f"zero patterns differ at ({i}, {j})")
    # A_ij = D_i B_ij / D_j  =>  D_j = D_i B_ij / A_ij
    D = _spanning_scales(a, n, lambda i, j, di: di * b[i][j] / a[i][j], root_last=False)
    for i in range(n):
        for j in range(n):
            if a[i][j] != D[i] * b[i][j] / D[j]:
                return Equivalence(False, reason=f"cycle products differ through ({i}, {j})")
    return Equivalence(True, tuple(D), "spanning-tree scales reproduce every entry")


@dataclass(frozen=True)
class Symmetrization:
    S: tuple
    delta: tuple


def symmetrize(A: CartanMatrix) -> Symmetrization:
    """S = A Delta^-1 symmetric with Delta positive diagonal.

    Delta is 1 at the last index of each component.
    """
    n = A.size
    a = A.entries
    # S_ij = A_ij / Delta_j must equal A_ji / Delta_i
    delta = _spanning_scales(a, n, lambda i, j, di: di * a[i][j] / a[j][i])
    S = tuple(tuple(a[i][j] / delta[j] for j in range(n)) for i in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if S[i][j] != S[j][i]:
                raise NotSymmetrizableError(
                    f"cycle products are not symmetric through ({A.labels[i]}, {A.labels[j]})"
                )
    return Symmetrization(S, tuple(delta))


def signature(S) -> tuple[int, int, int]:
    """Inertia (n_plus, n_minus, n_zero) by symmetric congruence elimination."""
    M = [list(r) for r in S]
    n = len(M)
    for i in range(n):
        for j in range(i + 1, n):
            if M[i][j] != M[j][i]:
                raise CartanError("signature needs a symmetric matrix")
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if M[i][i] != 0), None)
        if piv is not None:
            p = M[piv][piv]
            if scalar_sign(p) > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in active if i != piv]
            for r in rest:
                if M[r][piv] == 0:
                    continue
                f = M[r][piv] / p
                for c in rest:
                    M[r][c] = M[r][c] - f * M[piv][c]
            for r in rest:
                M[r][piv] = M[piv][r] = 0
            active = rest
            continue
        pair = next(((i, j) for i in active for j in active if i < j and M[i][j] != 0), None)
        if pair is None:
            break
        i, j = pair
        b = M[i][j]
        # [[0, b], [b, 0]] has one positive and one negative eigenvalue
        pos += 1
        neg += 1
        rest = [k for k in active if k not in (i, j)]
        new = {}
        for r in rest:
            for c in rest:
                new[r, c] = M[r][c] - (M[r][i] * M[j][c] + M[r][j] * M[i][c]) / b
        for (r, c), v in new.items():
            M[r][c] = v
        active = rest
    return pos, neg, n - pos - neg


# -- matrix file format -------------------------------------------------------

DOMAIN_TAGS = ("rational", "tower", "function-of-t")


def format_matrix_file(A: CartanMatrix) -> str:
    tag = {"rational": "rational", "tower": "tower", "function": "function-of-t"}[A.domain]
    lines = [f"size {A.size}", f"domain {tag}", "labels " + " ".join(A.labels)]
    for row in A.entries:
        lines.append(" ".join(to_text(x) for x in row))
    return "\n".join(lines) + "\n"


class MatrixParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_matrix_file(text: str, validate: bool = True):
    """Parse the matrix text format; returns a CartanMatrix (or raw rows)."""
    size = domain = None
    labels = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "size":
            try:
                size = int(rest)
            except ValueError:
                raise MatrixParseError(lineno, f"size must be an integer, got {rest!r}") from None
            continue
        if head == "domain":
            domain = rest.strip()
            if domain not in DOMAIN_TAGS:
                raise MatrixParseError(lineno, f"domain must be one of {DOMAIN_TAGS}")
            continue
        if head == "labels":
            labels = tuple(rest.split())
            continue
        if size is None:
            raise MatrixParseError(lineno, "size header must come before entries")
        tokens = line.split()
        if len(tokens) != size:
            raise MatrixParseError(lineno, f"expected {size} entries, got {len(tokens)}")
        try:
            rows.append(tuple(from_text(tok) for tok in tokens))
        except (ValueError, ZeroDivisionError) as exc:
            raise MatrixParseError(lineno, str(exc)) from None
        if domain == "rational" and not all(isinstance(x, Fraction) for x in rows[-1]):
            raise MatrixParseError(lineno, "non-rational entry in a rational matrix")
    if size is None:
        raise MatrixParseError(0, "missing size header")
    if len(rows) != size:
        raise MatrixParseError(0, f"expected {size} rows, got {len(rows)}")
    if not validate:
        return rows
    try:
        return CartanMatrix(tuple(rows), labels or ())
    except CartanError as exc:
        raise MatrixParseError(0, str(exc)) from None
