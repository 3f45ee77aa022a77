"""Colorings, point sets, Gram matrices and representability tests.

Coloring-matrix entries are read as squared distances throughout.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import ExactMatrix, QNum, ZERO, ONE, is_psd, matrix_det, matrix_rank, qnum, qnum_sign
from .graphs import Graph, canonical_matrix
from .polysys import (
    BasisCache,
    BudgetExceeded,
    DEFAULT_BUDGET,
    Poly,
    PolySystem,
    buchberger,
    count_distinct_solutions,
    ideal_is_trivial,
)

__all__ = [
    "Coloring",
    "PointSet",
    "AmbiguityError",
    "coloring_of",
    "distance_values",
    "coloring_matrix",
    "gram_of",
    "RealizabilityReport",
    "is_realizable_gram",
    "principal_rank",
    "weak_qr_system",
    "QRVerdict",
    "is_weakly_quasi_representable",
    "canonical_coloring",
    "diameter_graph",
    "polygon_coloring",
    "cube_coloring",
    "cube_points",
    "C1_MATRIX",
]

SEPARATION = 10**6


class AmbiguityError(ValueError):
    """Numeric distances could not be grouped with certainty."""


# ---------------------------------------------------------------------------
# colorings


class Coloring:
    """Surjective coloring of the pairs of ``[n]`` by colors ``1..s``."""

    __slots__ = ("n", "s", "matrix")

    def __init__(self, matrix: Sequence[Sequence[int]]):
        n = len(matrix)
        rows = tuple(tuple(int(v) for v in r) for r in matrix)
        if any(len(r) != n for r in rows):
            raise ValueError("coloring matrix must be square")
        for i in range(n):
            if rows[i][i] != 0:
                raise ValueError("diagonal must be zero")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("coloring matrix must be symmetric")
                if rows[i][j] < 1:
                    raise ValueError("colors are positive integers")
        used = {rows[i][j] for i in range(n) for j in range(i + 1, n)}
        s = max(used, default=0)
        if used != set(range(1, s + 1)):
            raise ValueError(f"colors {sorted(used)} are not onto 1..{s}")
        self.n, self.s, self.matrix = n, s, rows

    @classmethod
    def from_pairs(cls, n: int, colors: Sequence[int]) -> Coloring:
        """From upper-triangle colors in row-major order."""
        if len(colors) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} colors, got {len(colors)}")
        m = [[0] * n for _ in range(n)]
        it = iter(colors)
        for i in range(n):
            for j in range(i + 1, n):
                m[i][j] = m[j][i] = next(it)
        return cls(m)

    def __call__(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Coloring) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"Coloring(n={self.n}, s={self.s})"

    def pairs(self):
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield i, j, self.matrix[i][j]

    def class_sizes(self) -> list[int]:
        sizes = [0] * self.s
        for _, _, c in self.pairs():
            sizes[c - 1] += 1
        return sizes

    def relabel(self, h: Sequence[int]) -> Coloring:
        """Vertex ``i`` becomes ``h[i]``."""
        m = [[0] * self.n for _ in range(self.n)]
        for i, j, c in self.pairs():
            m[h[i]][h[j]] = m[h[j]][h[i]] = c
        return Coloring(m)

    def recolor(self, g: Mapping[int, int] | Sequence[int]) -> Coloring:
        """Color ``c`` becomes ``g[c]`` (a mapping, or a list indexed from 1 via ``g[c - 1]``)."""
        get = (lambda c: g[c]) if isinstance(g, Mapping) else (lambda c: g[c - 1])
        return Coloring([[0 if i == j else get(self.matrix[i][j]) for j in range(self.n)] for i in range(self.n)])

    def restrict(self, vertices: Sequence[int]) -> Coloring:
        """Induced coloring, with colors renumbered to stay onto ``1..s'``."""
        used = sorted({self.matrix[a][b] for i, a in enumerate(vertices) for b in vertices[i + 1:]})
        ren = {c: k + 1 for k, c in enumerate(used)}
        return Coloring([[0 if a == b else ren[self.matrix[a][b]] for b in vertices] for a in vertices])

    def to_text(self) -> str:
        body = " ".join(str(c) for _, _, c in self.pairs())
        return f"{self.n} {self.s}\n{body}\n"

    @classmethod
    def from_text(cls, text: str) -> Coloring:
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("coloring file needs a header line 'n s'")
        n, s = int(tokens[0]), int(tokens[1])
        c = cls.from_pairs(n, [int(t) for t in tokens[2:]])
        if c.s != s:
            raise ValueError(f"header says {s} colors, body uses {c.s}")
        return c


C1_MATRIX = (
    (0, 1, 2, 2, 1, 3, 3, 1),
    (1, 0, 1, 2, 2, 2, 3, 2),
    (2, 1, 0, 1, 2, 1, 2, 3),
    (2, 2, 1, 0, 1, 2, 1, 3),
    (1, 2, 2, 1, 0, 3, 2, 2),
    (3, 2, 1, 2, 3, 0, 2, 4),
    (3, 3, 2, 1, 2, 2, 0, 4),
    (1, 2, 3, 3, 2, 4, 4, 0),
)


def polygon_coloring(n: int, drop: Sequence[int] = ()) -> Coloring:
    """Coloring of a regular ``n``-gon (color = cyclic index distance), minus ``drop``."""
    keep = [v for v in range(n) if v not in set(drop)]
    m = [[0 if a == b else min((a - b) % n, (b - a) % n) for b in keep] for a in keep]
    return Coloring(m)


def cube_points() -> PointSet:
    return PointSet([tuple(qnum(v) for v in p) for p in itertools.product((0, 1), repeat=3)])


def cube_coloring() -> Coloring:
    return coloring_of(cube_points())


# ---------------------------------------------------------------------------
# point sets


class PointSet:
    """Finite point set, exact over Q(sqrt5) or numeric with interval coordinates."""

    def __init__(self, points: Sequence[Sequence], exact: bool = True):
        if exact:
            pts = tuple(tuple(qnum(c) for c in p) for p in points)
        else:
            from mpmath import iv

            pts = tuple(tuple(c if isinstance(c, type(iv.mpf(0))) else iv.mpf(c) for c in p) for p in points)
        dims = {len(p) for p in pts}
        if len(dims) > 1:
            raise ValueError("points have different dimensions")
        self.points = pts
        self.exact = exact
        self.dim = dims.pop() if dims else 0
        if exact and len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")

    @classmethod
    def numeric(cls, points: Sequence[Sequence], radius=None) -> PointSet:
        """Interval points around the given midpoints (``radius`` defaults to one ulp scale)."""
        from mpmath import iv, mpf, mp

        r = mpf(radius) if radius is not None else mpf(2) ** (-mp.prec + 8)
        return cls([[iv.mpf([mpf(c) - r, mpf(c) + r]) for c in p] for p in points], exact=False)

    def __len__(self) -> int:
        return len(self.points)

    def dist2(self, i: int, j: int):
        p, q = self.points[i], self.points[j]
        if self.exact:
            return sum(((a - b) * (a - b) for a, b in zip(p, q)), ZERO)
        total = 0
        for a, b in zip(p, q):
            total = total + (a - b) ** 2
        return total

    def distance_matrix(self) -> ExactMatrix:
        if not self.exact:
            raise ValueError("exact distance matrix needs exact points")
        n = len(self)
        return ExactMatrix([[self.dist2(i, j) for j in range(n)] for i in range(n)])


def _numeric_clusters(values: list) -> list[list[int]]:
    """Group interval values into certified-separable clusters."""
    order = sorted(range(len(values)), key=lambda k: values[k].mid)
    clusters: list[list[int]] = []
    hi = None
    for k in order:
        v = values[k]
        if clusters and v.a <= hi:
            clusters[-1].append(k)
            hi = max(hi, v.b)
        else:
            clusters.append([k])
            hi = v.b
    hulls = [(min(values[k].a for k in c), max(values[k].b for k in c)) for c in clusters]
    width = max((b - a for a, b in hulls), default=0)
    for (a1, b1), (a2, b2) in zip(hulls, hulls[1:]):
        if a2 - b1 <= SEPARATION * width:
            raise AmbiguityError("distance clusters are not separable")
    for a, b in hulls:
        if a <= 0:
            raise AmbiguityError("a distance cannot be certified nonzero")
    return clusters


def distance_values(X: PointSet) -> list:
    """Distinct squared distances in increasing order (intervals if numeric)."""
    n = len(X)
    vals = [X.dist2(i, j) for i in range(n) for j in range(i + 1, n)]
    if X.exact:
        if any(v == ZERO for v in vals):
            raise ValueError("points must be distinct")
        return sorted(set(vals))
    clusters = _numeric_clusters(vals)
    return [vals[c[0]] for c in clusters]


def coloring_of(X: PointSet) -> Coloring:
    n = len(X)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    vals = [X.dist2(i, j) for i, j in pairs]
    colors = [0] * len(pairs)
    if X.exact:
        ordered = sorted(set(vals))
        if ordered and ordered[0] == ZERO:
            raise ValueError("points must be distinct")
        index = {v: k + 1 for k, v in enumerate(ordered)}
        colors = [index[v] for v in vals]
    else:
        for k, cluster in enumerate(_numeric_clusters(vals)):
            for p in cluster:
                colors[p] = k + 1
    return Coloring.from_pairs(n, colors)


def diameter_graph(X: PointSet) -> Graph:
    n = len(X)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    vals = [X.dist2(i, j) for i, j in pairs]
    if X.exact:
        top = max(vals)
        return Graph(n, [p for p, v in zip(pairs, vals) if v == top])
    clusters = _numeric_clusters(vals)
    return Graph(n, [pairs[k] for k in clusters[-1]])


# ---------------------------------------------------------------------------
# matrices


def coloring_matrix(c: Coloring, values: Mapping[int, object], zero=ZERO) -> list[list]:
    """``C(values)``: entry ``values[c(i, j)]`` off the diagonal, ``zero`` on it."""
    return [[zero if i == j else values[c(i, j)] for j in range(c.n)] for i in range(c.n)]


def gram_of(M, base: int | None = None):
    """Gram operator ``(m_ib + m_jb - m_ij) / 2`` with point ``base`` at the origin.

    Accepts an :class:`ExactMatrix` (returning one) or a list of lists of
    ring elements.  ``base`` defaults to the last index.
    """
    exact = isinstance(M, ExactMatrix)
    rows = M.tolist() if exact else [list(r) for r in M]
    n = len(rows)
    b = n - 1 if base is None else base
    idx = [i for i in range(n) if i != b]
    half = Fraction(1, 2)
    G = [[(rows[i][b] + rows[j][b] - rows[i][j]) * half for j in idx] for i in idx]
    return ExactMatrix(G) if exact else G


@dataclass(frozen=True)
class RealizabilityReport:
    psd: bool
    rank_ok: bool
    diagonal_positive: bool
    off_diagonal_ok: bool
    rank: int

    @property
    def ok(self) -> bool:
        return self.psd and self.rank_ok and self.diagonal_positive and self.off_diagonal_ok

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "psd": self.psd,
            "rank_ok": self.rank_ok,
            "diagonal_positive": self.diagonal_positive,
            "off_diagonal_ok": self.off_diagonal_ok,
            "rank": self.rank,
            "ok": self.ok,
        }


def is_realizable_gram(M: ExactMatrix, d: int = 3) -> RealizabilityReport:
    """Exact check of the conditions for ``M`` to be the Gram matrix of
    distinct nonzero points in R^d (with a further point at the origin)."""
    if not M.is_symmetric():
        raise ValueError("Gram matrix must be symmetric")
    n = M.shape[0]
    rank = matrix_rank(M)
    diag = all(qnum_sign(M[i, i]) > 0 for i in range(n))
    off = all(
        qnum_sign((M[i, i] + M[j, j]) / 2 - M[i, j]) > 0 for i in range(n) for j in range(i + 1, n)
    )
    return RealizabilityReport(is_psd(M), rank <= d, diag, off, rank)


def principal_rank(M: ExactMatrix) -> int:
    """Largest ``k`` with a nonzero ``k x k`` principal minor.

    Searches downward from ``rank(M)``, which bounds the answer.
    """
    if not M.is_square():
        raise ValueError("principal rank needs a square matrix")
    n = M.shape[0]
    for k in range(matrix_rank(M), 0, -1):
        for S in itertools.combinations(range(n), k):
            if matrix_det(M.submatrix(list(S))) != ZERO:
                return k
    return 0


# ---------------------------------------------------------------------------
# polynomial systems


def _det(M: list[list]):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        a = M[0][j]
        if not a:
            continue
        t = a * _det([r[:j] + r[j + 1:] for r in M[1:]])
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return total if total is not None else M[0][0] * 0


def weak_qr_system(c: Coloring, d: int = 3, fixed: Mapping[int, object] | None = None) -> PolySystem:
    """Polynomial system whose solutions make ``C(1, x1, ..., x_{s-1})`` weakly
    representable in R^d.

    Color ``k >= 2`` carries the variable ``x{k-1}`` unless ``fixed`` assigns
    it a value.  Equations: every ``(d+1) x (d+1)`` principal minor of the
    Gram matrix (base point last) vanishes, and ``1 + u * D = 0`` where ``D``
    is the product of ``x(x - 1)`` over the free values, their pairwise
    differences, and their differences to the fixed values.
    """
    fixed = {int(k): qnum(v) for k, v in (fixed or {}).items()}
    if 1 in fixed and fixed[1] != ONE:
        raise ValueError("color 1 is normalized to 1")
    fixed.pop(1, None)
    if any(not 2 <= k <= c.s for k in fixed):
        raise ValueError("fixed colors must lie in 2..s")
    fvals = list(fixed.values())
    if any(v == ZERO or v == ONE for v in fvals) or len(set(fvals)) != len(fvals):
        raise ValueError("fixed values must be distinct and avoid 0 and 1")
    free = [k for k in range(2, c.s + 1) if k not in fixed]
    names = [f"x{k - 1}" for k in free]
    variables = names + (["u"] if names else [])
    one = Poly.const(1, variables)
    values: dict[int, Poly] = {1: one}
    for k, v in fixed.items():
        values[k] = Poly.const(v, variables)
    xs = Poly.gens(variables)
    for k, x in zip(free, xs):
        values[k] = x
    C = coloring_matrix(c, values, zero=Poly(variables))
    G = gram_of(C)
    eqs: list[Poly] = []
    seen = set()
    for T in itertools.combinations(range(c.n - 1), d + 1):
        det = _det([[G[i][j] for j in T] for i in T])
        if det and det not in seen:
            seen.add(det)
            eqs.append(det)
    if names:
        D = one
        free_x = xs[: len(names)]
        for x in free_x:
            D = D * x * (x - 1)
        for a, b in itertools.combinations(free_x, 2):
            D = D * (a - b)
        for x in free_x:
            for v in fvals:
                D = D * (x - v)
        eqs.append(D * xs[-1] + 1)
    return PolySystem(eqs, variables)


@dataclass
class QRVerdict:
    status: str  # "yes", "no" or "budget"
    count: int | str | None = None
    basis: object = None

    def to_dict(self) -> dict:
        return {"status": self.status, "count": self.count}


def is_weakly_quasi_representable(
    c: Coloring,
    d: int = 3,
    fixed: Mapping[int, object] | None = None,
    budget: int = DEFAULT_BUDGET,
    cache: BasisCache | None = None,
) -> QRVerdict:
    sys = weak_qr_system(c, d, fixed)
    try:
        gb = cache.groebner(sys, budget) if cache is not None else buchberger(sys, budget)
        if ideal_is_trivial(gb):
            return QRVerdict("no", 0, gb)
        return QRVerdict("yes", count_distinct_solutions(gb, budget), gb)
    except BudgetExceeded:
        return QRVerdict("budget")


# ---------------------------------------------------------------------------
# canonical forms


def canonical_coloring(c: Coloring) -> bytes:
    """Byte string equal for two colorings iff they are equivalent.

    Colors are first ordered by class size; every permutation among colors of
    equal class size is tried and the largest vertex-canonical certificate is
    kept.
    """
    sizes = c.class_sizes()
    order = sorted(range(1, c.s + 1), key=lambda k: sizes[k - 1])
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda k: sizes[k - 1])]
    best = None
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        seq = [k for p in perms for k in p]
        g = {old: new + 1 for new, old in enumerate(seq)}
        cert, _ = canonical_matrix(c.recolor(g).matrix)
        if best is None or cert > best:
            best = cert
    return f"{c.n}:{c.s}:".encode() + bytes(best or ())
