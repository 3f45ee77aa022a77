"""Extension graphs of 8-point colorings.

A border vector ``a`` lists the colors from a new point to the eight base
points.  Colors are global labels ``1..5``: labels ``<= s`` are the base
coloring's own colors and larger labels are new distances.  Border points are
appended after the base points and the Gram base point is the last base
point, so the base system is a sub-system of every bordered one.
"""
from __future__ import annotations

import contextlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .dsets import Coloring, PointSet, coloring_of, gram_of, _det, weak_qr_system, is_realizable_gram, distance_values
from .exact import ExactMatrix, QNum, ZERO, ONE, qnum
from .graphs import Graph, max_clique
from .polysys import (
    BasisCache,
    BudgetExceeded,
    DEFAULT_BUDGET,
    GroebnerBasis,
    Poly,
    PolySystem,
    buchberger,
    eliminate,
    ideal_is_trivial,
    radical_basis,
    verify_solution,
)

__all__ = [
    "MAX_COLORS",
    "BorderVector",
    "Undecided",
    "ExtensionContext",
    "ExtensionGraph",
    "border_vertex_test",
    "border_edge_test",
    "has_loop",
    "omega_star",
    "build_extension_graph",
    "enumerate_border_vectors",
    "DodecaCertificate",
    "verify_dodeca_clique",
    "no_loop_certificate",
    "unique_base_solution",
    "pins_from_values",
    "pinned_loop",
    "candidate_points",
    "CandidateList",
    "NonRigidError",
    "realize_numeric",
]

MAX_COLORS = 5


class Undecided(Exception):
    """A Groebner computation hit its budget."""


class NonRigidError(ValueError):
    """The point set does not span R^3."""


@dataclass(frozen=True)
class BorderVector:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if any(not 1 <= x <= MAX_COLORS for x in self.a):
            raise ValueError(f"border colors must lie in 1..{MAX_COLORS}")

    def __iter__(self):
        return iter(self.a)

    def __len__(self) -> int:
        return len(self.a)

    def __str__(self) -> str:
        return "".join(str(x) for x in self.a)


def _bv(a) -> BorderVector:
    return a if isinstance(a, BorderVector) else BorderVector(tuple(a))


# ---------------------------------------------------------------------------
# Groebner tests


class ExtensionContext:
    """Caches the base Groebner basis of one coloring and runs border tests."""

    def __init__(self, base: Coloring, d: int = 3, budget: int = DEFAULT_BUDGET, cache: BasisCache | None = None):
        if base.s > MAX_COLORS:
            raise ValueError(f"base coloring uses more than {MAX_COLORS} colors")
        self.base = base
        self.d = d
        self.budget = budget
        self.cache = cache
        self.base_system = weak_qr_system(base, d)
        self._base_gb: GroebnerBasis | None = None
        self.calls = 0

    def _gb(self, sys: PolySystem) -> GroebnerBasis:
        self.calls += 1
        try:
            if self.cache is not None:
                return self.cache.groebner(sys, self.budget)
            return buchberger(sys, self.budget)
        except BudgetExceeded as exc:
            raise Undecided(str(exc)) from exc

    @property
    def base_gb(self) -> GroebnerBasis:
        if self._base_gb is None:
            self._base_gb = self._gb(self.base_system)
        return self._base_gb

    def bordered_system(
        self,
        borders: Sequence[BorderVector],
        cross: dict[tuple[int, int], int],
        pins: dict[int, Sequence] | None = None,
        known: Sequence[int] | None = None,
    ) -> PolySystem:
        """Base basis plus the minors meeting the border points plus saturation.

        ``pins`` maps a base color to univariate integer coefficients (highest
        degree first) that its value must satisfy.  Pinning only enlarges the
        ideal, so a consistent pinned system proves the unpinned one consistent.
        With pins the raw base equations replace the cached basis.

        ``known`` restricts the minors to those whose base points all lie in
        it (it must contain the Gram base, the last base point).  The result
        is then a subsystem of the full one, so its inconsistency rules out
        every completion of the border entries at ``known``.
        """
        n0 = self.base.n
        k = len(borders)
        n = n0 + k
        labels = [[0] * n for _ in range(n)]
        for i in range(n0):
            for j in range(n0):
                labels[i][j] = self.base(i, j) if i != j else 0
        for t, a in enumerate(borders):
            if len(a) != n0:
                raise ValueError(f"border vector needs {n0} entries")
            for j, c in enumerate(a):
                labels[n0 + t][j] = labels[j][n0 + t] = c
        for (s, t), c in cross.items():
            labels[n0 + s][n0 + t] = labels[n0 + t][n0 + s] = c
        used = sorted({labels[i][j] for i in range(n) for j in range(i + 1, n)} - {1})
        new = [c for c in used if c > self.base.s]
        names = [f"x{c - 1}" for c in used]
        variables = names + ["u", "v"]
        xs = dict(zip(used, Poly.gens(variables)))
        one = Poly.const(1, variables)
        xs[1] = one
        zero = Poly(variables)
        M = [[zero if i == j else xs[labels[i][j]] for j in range(n)] for i in range(n)]
        base_idx = n0 - 1
        G = gram_of(M, base=base_idx)
        # Gram index of point p (p != base_idx)
        gidx = [p if p < base_idx else p - 1 for p in range(n)]
        border_g = {gidx[p] for p in range(n0, n)}
        if known is not None:
            if base_idx not in known:
                raise ValueError("known points must include the Gram base point")
            allowed = {gidx[p] for p in known if p != base_idx} | border_g
        else:
            allowed = None
        if pins:
            eqs = [g.extend(variables) for g in self.base_system.polys]
            for c, coeffs in pins.items():
                x = xs[c]
                p = Poly(variables)
                for co in coeffs:
                    p = p * x + int(co)
                eqs.append(p)
        else:
            eqs = [g.extend(variables) for g in self.base_gb.generators]
        seen = set(eqs)
        for T in itertools.combinations(range(n - 1), self.d + 1):
            if not border_g.intersection(T):
                continue
            if allowed is not None and not allowed.issuperset(T):
                continue
            det = _det([[G[i][j] for j in T] for i in T])
            if det and det not in seen:
                seen.add(det)
                eqs.append(det)
        if new:
            D = one
            for c in new:
                D = D * xs[c] * (xs[c] - 1)
            for c in new:
                for o in used:
                    if o != c and (o not in new or o < c):
                        D = D * (xs[c] - xs[o])
            eqs.append(D * Poly.var("v", variables) + 1)
        return PolySystem(eqs, variables)

    def _consistent(self, borders, cross, pins=None) -> bool:
        gb = self._gb(self.bordered_system(borders, cross, pins))
        return not ideal_is_trivial(gb)

    def vertex_test(self, a) -> bool:
        return self._consistent([_bv(a)], {})

    def partial_vertex_test(self, entries: dict[int, int]) -> bool:
        """Vertex test using only the border entries given (base point -> color).

        False proves that no border vector extending ``entries`` passes.
        """
        n0 = self.base.n
        a = [1] * n0
        for p, c in entries.items():
            a[p] = c
        gb = self._gb(self.bordered_system([_bv(a)], {}, known=sorted(entries)))
        return not ideal_is_trivial(gb)

    def edge_test(self, a, b, i: int) -> bool:
        return self._consistent([_bv(a), _bv(b)], {(0, 1): i})

    def edge_witness(self, a, b) -> int | None:
        for i in range(1, MAX_COLORS + 1):
            if self.edge_test(a, b, i):
                return i
        return None

    def has_loop(self, a) -> bool:
        return self.edge_witness(a, a) is not None


def border_vertex_test(C: Coloring, a, ctx: ExtensionContext | None = None) -> bool:
    return (ctx or ExtensionContext(C)).vertex_test(a)


def border_edge_test(C: Coloring, a, b, ctx: ExtensionContext | None = None) -> int | None:
    """Smallest color ``i`` for which the doubly bordered coloring passes, if any."""
    return (ctx or ExtensionContext(C)).edge_witness(a, b)


def has_loop(C: Coloring, a, ctx: ExtensionContext | None = None) -> bool:
    return (ctx or ExtensionContext(C)).has_loop(a)


# ---------------------------------------------------------------------------
# the graph


@dataclass
class ExtensionGraph:
    base: Coloring
    vertices: list[BorderVector]
    edges: dict[tuple[int, int], int] = field(default_factory=dict)
    loops: set[int] = field(default_factory=set)
    undecided: list[str] = field(default_factory=list)

    def graph(self) -> Graph:
        return Graph(len(self.vertices), list(self.edges))

    def to_json(self) -> str:
        return json.dumps(
            {
                "vertices": [str(v) for v in self.vertices],
                "edges": [[i, j, w] for (i, j), w in sorted(self.edges.items())],
                "loops": sorted(self.loops),
                "undecided": self.undecided,
            },
            indent=2,
        )

    def to_dot(self) -> str:
        lines = ["graph extension {"]
        for k, v in enumerate(self.vertices):
            lines.append(f'  {k} [label="{v}"];')
        for (i, j), w in sorted(self.edges.items()):
            lines.append(f'  {i} -- {j} [label="{w}"];')
        for k in sorted(self.loops):
            lines.append(f"  {k} -- {k};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def omega_star(GC: ExtensionGraph) -> int:
    if GC.undecided:
        raise Undecided("undecided elements: " + ", ".join(GC.undecided))
    if not GC.vertices:
        return 0
    return len(max_clique(GC.graph())) + len(GC.loops)


def build_extension_graph(C: Coloring, vectors: Iterable, ctx: ExtensionContext | None = None, loops: bool = True) -> ExtensionGraph:
    """Test the given border vectors and all pairs among the accepted ones."""
    ctx = ctx or ExtensionContext(C)
    GC = ExtensionGraph(C, [])
    for a in vectors:
        a = _bv(a)
        try:
            if ctx.vertex_test(a):
                GC.vertices.append(a)
        except Undecided:
            GC.undecided.append(f"vertex {a}")
    for i, j in itertools.combinations(range(len(GC.vertices)), 2):
        try:
            w = ctx.edge_witness(GC.vertices[i], GC.vertices[j])
        except Undecided:
            GC.undecided.append(f"edge {GC.vertices[i]}-{GC.vertices[j]}")
            continue
        if w is not None:
            GC.edges[(i, j)] = w
    if loops:
        for k, a in enumerate(GC.vertices):
            try:
                if ctx.has_loop(a):
                    GC.loops.add(k)
            except Undecided:
                GC.undecided.append(f"loop {a}")
    return GC


def enumerate_border_vectors(C: Coloring, ctx: ExtensionContext | None = None, limit: int | None = None):
    """All border vectors passing (or undecided by) the vertex test (exhaustive; slow).

    Entries are assigned starting from the Gram base point (the last base
    point) and then in index order; a prefix is pruned once the minors among
    its points are inconsistent with the base basis.  New labels are
    introduced in increasing order of assignment, so each vector is produced
    once up to renaming of the new colors.
    """
    ctx = ctx or ExtensionContext(C)
    n0 = C.n
    order = [n0 - 1] + list(range(n0 - 1))
    found = 0

    def prefix_ok(prefix: list[int]) -> bool:
        k = len(prefix)
        if k < ctx.d + 1 or k == n0:
            return True
        try:
            return ctx.partial_vertex_test(dict(zip(order, prefix)))
        except Undecided:
            return True

    def rec(prefix: list[int]):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if len(prefix) == n0:
            vec = [0] * n0
            for p, c in zip(order, prefix):
                vec[p] = c
            try:
                ok = ctx.vertex_test(vec)
            except Undecided:
                ok = True  # left for the graph builder to report as undecided
            if ok:
                found += 1
                yield BorderVector(tuple(vec))
            return
        top = max([C.s] + prefix)
        for c in range(1, min(top + 1, MAX_COLORS) + 1):
            prefix.append(c)
            if prefix_ok(prefix):
                yield from rec(prefix)
            prefix.pop()

    yield from rec([])


# ---------------------------------------------------------------------------
# the dodecahedron over the cube


@dataclass
class DodecaCertificate:
    vectors: list[BorderVector]
    vertex_ok: list[bool]
    edge_colors: dict[tuple[int, int], int]
    edge_ok: dict[tuple[int, int], bool]
    values: dict[int, QNum]
    distance_multiset: dict[str, int]
    five_distance: bool
    realizable: bool
    matches_dodecahedron: bool

    @property
    def ok(self) -> bool:
        return (
            len(self.vectors) == 12
            and all(self.vertex_ok)
            and len(self.edge_ok) == 66
            and all(self.edge_ok.values())
            and self.five_distance
            and self.realizable
            and self.matches_dodecahedron
        )

    def to_dict(self) -> dict:
        return {
            "vectors": [str(v) for v in self.vectors],
            "vertex_tests": sum(self.vertex_ok),
            "edge_tests": sum(self.edge_ok.values()),
            "values": {str(k): str(v) for k, v in self.values.items()},
            "distance_multiset": self.distance_multiset,
            "five_distance": self.five_distance,
            "realizable": self.realizable,
            "matches_dodecahedron": self.matches_dodecahedron,
            "ok": self.ok,
        }


def verify_dodeca_clique(C_cube: Coloring | None = None, ctx: ExtensionContext | None = None) -> DodecaCertificate:
    """Certify that the dodecahedron's 12 non-cube vertices form a 12-clique
    of the extension graph over the cube coloring."""
    from .dodeca import build_dodecahedron, subset_census, _class_preserving_maps
    from .dsets import cube_coloring, canonical_coloring

    C = C_cube or cube_coloring()
    model = build_dodecahedron()
    cube = subset_census(8)["small"][3][0]
    sub = coloring_of(PointSet([model.vertices[v] for v in cube]))
    maps = _class_preserving_maps(C.matrix, sub.matrix, 8, limit=1)
    if not maps:
        raise ValueError("coloring is not the cube coloring")
    order = [cube[maps[0][i]] for i in range(8)]  # base point i -> dodecahedron vertex
    # dodecahedron distance class -> global label
    base_classes = sorted({model.cls[x][y] for x in order for y in order if x != y})
    label = {}
    for i in range(8):
        for j in range(8):
            if i != j:
                label[model.cls[order[i]][order[j]]] = C(i, j)
    nxt = C.s + 1
    for k in range(1, 6):
        if k not in label:
            label[k], nxt = nxt, nxt + 1
    rest = [v for v in range(20) if v not in order]
    vectors = [BorderVector(tuple(label[model.cls[v][b]] for b in order)) for v in rest]
    ctx = ctx or ExtensionContext(C)
    vertex_ok = [ctx.vertex_test(a) for a in vectors]
    edge_colors, edge_ok = {}, {}
    for i, j in itertools.combinations(range(12), 2):
        c = label[model.cls[rest[i]][rest[j]]]
        edge_colors[(i, j)] = c
        edge_ok[(i, j)] = ctx.edge_test(vectors[i], vectors[j], c)
    # values normalized so label 1 has squared length 1
    unit = next(model.classes[k - 1] for k, l in label.items() if l == 1)
    values = {l: model.classes[k - 1] / unit for k, l in label.items()}
    # the labelled values solve the vertex systems exactly
    for k, a in enumerate(vectors):
        if not _solves(ctx.bordered_system([a], {}), values):
            vertex_ok[k] = False
    pts = order + rest
    lab20 = [[0 if x == y else label[model.cls[x][y]] for y in pts] for x in pts]
    D = ExactMatrix([[ZERO if x == y else values[lab20[i][j]] for j, y in enumerate(pts)] for i, x in enumerate(pts)])
    rep = is_realizable_gram(gram_of(D), 3)
    multiset: dict[str, int] = {}
    for i in range(20):
        for j in range(i + 1, 20):
            key = str(D[i, j])
            multiset[key] = multiset.get(key, 0) + 1
    dodeca_coloring = coloring_of(PointSet(model.vertices))
    recon = Coloring([[0 if i == j else sorted(values.values()).index(D[i, j]) + 1 for j in range(20)] for i in range(20)])
    scaled = sorted((c / unit for c in model.classes))
    dodeca_multiset = {}
    for i in range(20):
        for j in range(i + 1, 20):
            key = str(model.dist2[i, j] / unit)
            dodeca_multiset[key] = dodeca_multiset.get(key, 0) + 1
    matches = multiset == dodeca_multiset and canonical_coloring(recon) == canonical_coloring(dodeca_coloring)
    return DodecaCertificate(
        vectors=vectors,
        vertex_ok=vertex_ok,
        edge_colors=edge_colors,
        edge_ok=edge_ok,
        values=dict(sorted(values.items())),
        distance_multiset=dict(sorted(multiset.items())),
        five_distance=len(multiset) == 5 and sorted(values.values()) == scaled,
        realizable=rep.ok,
        matches_dodecahedron=matches,
    )


def _solves(sys: PolySystem, values: dict[int, QNum]) -> bool:
    """Exact check that the color values satisfy every non-saturation equation."""
    assign = {f"x{l - 1}": v for l, v in values.items() if l != 1}
    assign = {k: v for k, v in assign.items() if k in sys.variables}
    assign.update(u=ZERO, v=ZERO)
    if len(set(values.values())) != len(values) or any(v in (ZERO, ONE) for l, v in values.items() if l != 1):
        return False
    return all(p.evaluate(assign) == 0 for p in sys.polys if not _mentions(p, ("u", "v")))


def _mentions(p: Poly, names) -> bool:
    idx = [p.variables.index(n) for n in names if n in p.variables]
    return any(e[i] for e in p.terms for i in idx)


def no_loop_certificate(C: Coloring, values: dict[int, object] | None = None, budget: int = DEFAULT_BUDGET) -> bool:
    """True when no two distinct points can share a border vector over ``C``.

    ``values`` fixes the base colors; by default they are read off the base
    system, which must then have a single rational solution.  The border
    distances ``y1..yn`` and the separation ``z`` of the two points are left
    symbolic, so a trivial ideal rules out a loop at every border vector and
    every witness color at once.
    """
    if values is None:
        values = unique_base_solution(C, budget=budget)
    n0 = C.n
    ys = [f"y{k + 1}" for k in range(n0)]
    variables = ys + ["z", "w"]
    gens = Poly.gens(variables)
    Y, z, w = gens[:n0], gens[n0], gens[n0 + 1]
    vals = {k: Poly.const(qnum(v), variables) for k, v in values.items()}
    vals[1] = Poly.const(1, variables)
    zero = Poly(variables)
    n = n0 + 2
    M = [[zero] * n for _ in range(n)]
    for i in range(n0):
        for j in range(n0):
            if i != j:
                M[i][j] = vals[C(i, j)]
    for t in (n0, n0 + 1):
        for j in range(n0):
            M[t][j] = M[j][t] = Y[j]
    M[n0][n0 + 1] = M[n0 + 1][n0] = z
    G = gram_of(M, base=n0 - 1)
    border = {n0 - 1, n0}
    eqs = []
    seen = set()
    for T in itertools.combinations(range(n - 1), 4):
        if not border.intersection(T):
            continue
        det = _det([[G[i][j] for j in T] for i in T])
        if det and det not in seen:
            seen.add(det)
            eqs.append(det)
    prod = z
    for y in Y:
        prod = prod * y
    eqs.append(prod * w + 1)
    gb = buchberger(PolySystem(eqs, variables), budget)
    return ideal_is_trivial(gb)


def unique_base_solution(C: Coloring, d: int = 3, budget: int = DEFAULT_BUDGET) -> dict[int, Fraction]:
    """Color values of the only solution of the base system (rational case)."""
    sys = weak_qr_system(C, d)
    gb = buchberger(sys, budget)
    xs = [v for v in sys.variables if v != "u"]
    if not xs:
        return {}
    if ideal_is_trivial(gb):
        raise ValueError("base coloring is not weakly quasi representable")
    J = radical_basis(eliminate(gb, xs), budget)
    out: dict[int, Fraction] = {}
    for g in J.generators:
        if g.degree() != 1 or len(g.terms) != 2:
            raise ValueError("base system does not have a single rational solution")
        k = next(i for i, e in enumerate(g.lm) if e)
        const = g.terms.get((0,) * len(xs), 0)
        out[int(xs[k][1:]) + 1] = -const
    if len(out) != len(xs):
        raise ValueError("base system does not have a single rational solution")
    return out


def pins_from_values(values: dict[int, object], degree: int = 8, maxcoeff: int = 10**6) -> dict[int, list[int]]:
    """Integer polynomials vanishing at numeric color values (found by PSLQ).

    The pins only steer the search; any result certified by a pinned system
    stays valid whatever the pins are.
    """
    import mpmath

    out = {}
    for k, v in values.items():
        if k == 1:
            continue
        poly = mpmath.findpoly(mpmath.mpf(v), degree, maxcoeff=maxcoeff)
        if poly is None:
            raise ValueError(f"no integer polynomial found for color {k}")
        out[k] = [int(c) for c in poly]
    return out


def pinned_loop(C: Coloring, a, pins: dict[int, Sequence], ctx: ExtensionContext | None = None) -> int | None:
    """Witness color of a loop at ``a`` found with pinned base values, if any.

    A returned color proves the loop; ``None`` proves nothing about the
    unpinned question.
    """
    ctx = ctx or ExtensionContext(C)
    a = _bv(a)
    for i in range(1, MAX_COLORS + 1):
        if ctx._consistent([a, a], {(0, 1): i}, pins):
            return i
    return None


# ---------------------------------------------------------------------------
# geometric candidates


def realize_numeric(c: Coloring, values: dict[int, object], dps: int = 60) -> PointSet:
    """Points in R^3 realizing ``c`` with squared distances ``values``."""
    import mpmath

    with mpmath.workdps(dps + 10), _iv_dps(dps + 10):
        n = c.n
        D = [[mpmath.mpf(0) if i == j else mpmath.mpmathify(values[c(i, j)]) for j in range(n)] for i in range(n)]
        G = mpmath.matrix(gram_of(D))
        E, V = mpmath.eigsy(G)
        order = sorted(range(n - 1), key=lambda k: -E[k])
        if any(E[k] < -mpmath.mpf(10) ** (-dps // 2) for k in order):
            raise ValueError("distances are not Euclidean")
        if any(abs(E[k]) > mpmath.mpf(10) ** (-dps // 2) for k in order[3:]):
            raise ValueError("realization needs more than three dimensions")
        cols = order[:3]
        pts = [[V[i, k] * mpmath.sqrt(max(E[k], 0)) for k in cols] for i in range(n - 1)]
        pts.append([mpmath.mpf(0)] * 3)
        return PointSet.numeric(pts, radius=mpmath.mpf(10) ** (-dps // 2))


@contextlib.contextmanager
def _iv_dps(dps: int):
    from mpmath import iv

    old = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = old


def _mid(x):
    import mpmath

    if isinstance(x, QNum):
        return x.to_mpf()
    if hasattr(x, "mid"):
        return mpmath.mpf(x.mid)
    return mpmath.mpf(x)


class CandidateList(list):
    """Isolated candidate points; ``families`` lists the label patterns whose
    solution sets are curves (each such point would also qualify)."""

    def __init__(self, points=(), families=()):
        super().__init__(points)
        self.families = list(families)


def candidate_points(X: PointSet, max_distances: int = 5, dps: int = 50, tol: float = 1e-7) -> CandidateList:
    import mpmath

    with mpmath.workdps(dps + 20), _iv_dps(dps + 20):
        return _candidate_points(X, max_distances, dps, tol)


def _candidate_points(X: PointSet, max_distances: int, dps: int, tol: float) -> CandidateList:
    """All isolated points ``q`` with ``|A(X + {q})| <= max_distances``.

    Each point of ``X`` is given a label: a known squared distance of ``X`` or
    one of the new unknown values (introduced in order).  With ``r = |q|^2``
    the conditions ``|q - x|^2 = value`` are linear in ``(q, r, new values)``;
    partial systems are pruned in floating point, complete ones are solved
    together with ``r = |q|^2`` and certified in ``dps``-digit arithmetic.
    """
    import mpmath

    pts_mp = [[_mid(c) for c in p] for p in X.points]
    n = len(pts_mp)
    if X.dim != 3:
        raise NonRigidError("points must lie in R^3")
    known_mp = [_mid(v) for v in distance_values(X)]
    s = len(known_mp)
    m = max_distances - s
    if m < 0:
        return []
    # rigidity: the points span R^3 affinely
    base = pts_mp[-1]
    diffs = mpmath.matrix([[p[k] - base[k] for k in range(3)] for p in pts_mp[:-1]])
    sv = mpmath.svd_r(diffs, compute_uv=False) if n > 1 else []
    if n < 4 or min(sorted(sv, reverse=True)[:3]) < mpmath.mpf(10) ** -10:
        raise NonRigidError("point set is not rigid in R^3")

    pts_f = [[float(c) for c in p] for p in pts_mp]
    known_f = [float(v) for v in known_mp]
    nvar = 4 + m  # q1 q2 q3 r nu_1..nu_m

    def row_for(i: int, lab: int):
        # 2 x.q - r (+ nu) = |x|^2 - known   or   2 x.q - r + nu_k = |x|^2
        x = pts_f[i]
        row = [2 * x[0], 2 * x[1], 2 * x[2], -1.0] + [0.0] * m
        rhs = x[0] ** 2 + x[1] ** 2 + x[2] ** 2
        if lab < s:
            rhs -= known_f[lab]
        else:
            row[4 + lab - s] = 1.0
        return row, rhs

    def reduce(rows, row, rhs):
        """Reduce against echelon rows; returns (row, rhs) remainder."""
        row = row[:]
        for piv, r, b in rows:
            f = row[piv]
            if f:
                row = [a - f * c for a, c in zip(row, r)]
                rhs -= f * b
        return row, rhs

    leaves: list[tuple[int, ...]] = []

    def rec(i: int, labels: list[int], rows, new_used: int):
        if i == n:
            leaves.append(tuple(labels))
            return
        for lab in range(s + min(new_used + 1, m)):
            row, rhs = row_for(i, lab)
            row, rhs = reduce(rows, row, rhs)
            piv = max(range(nvar), key=lambda k: abs(row[k]))
            if abs(row[piv]) < tol:
                if abs(rhs) > tol * 10:
                    continue
                new_rows = rows
            else:
                p = row[piv]
                row = [a / p for a in row]
                rhs /= p
                new_rows = []
                for pv, r, b in rows:
                    f = r[piv]
                    if f:
                        r = [a - f * c for a, c in zip(r, row)]
                        b -= f * rhs
                    new_rows.append((pv, r, b))
                new_rows.append((piv, row, rhs))
            labels.append(lab)
            rec(i + 1, labels, new_rows, max(new_used, lab - s + 1))
            labels.pop()

    rec(0, [], [], 0)

    # screen leaves in double precision; only promising ones are redone
    # and certified in high precision
    found: list[tuple] = []
    families: list[tuple[int, ...]] = []
    promising = []
    for labels in leaves:
        sols, family = _solve_leaf_float(pts_f, known_f, labels, s)
        if family:
            promising.append(labels)
        elif any(_few_distances(pts_f, sol[:3], max_distances) for sol in sols):
            promising.append(labels)
    eps = mpmath.mpf(10) ** (-(dps // 2))
    for labels in promising:
        sols, family = _solve_leaf(pts_mp, known_mp, labels, s, m, eps)
        if family:
            families.append(labels)
        for sol in sols:
            q = sol[:3]
            if all(mpmath.norm(mpmath.matrix(q) - mpmath.matrix(f)) > eps for f in found):
                if _certify(pts_mp, q, max_distances, dps):
                    found.append(tuple(q))
    return CandidateList(found, families)


def _leaf_system(pts, known, labels, s):
    used_new = sorted({l - s for l in labels if l >= s})
    rows, rhs = [], []
    for x, lab in zip(pts, labels):
        row = [2 * x[0], 2 * x[1], 2 * x[2], -1] + [0] * len(used_new)
        b = x[0] ** 2 + x[1] ** 2 + x[2] ** 2
        if lab < s:
            b -= known[lab]
        else:
            row[4 + used_new.index(lab - s)] = 1
        rows.append(row)
        rhs.append(b)
    return rows, rhs


def _solve_leaf_float(pts, known, labels, s, eps: float = 1e-9):
    """Double-precision version of :func:`_solve_leaf` used for screening."""
    import numpy as np

    rows, rhs = _leaf_system(pts, known, labels, s)
    A, b = np.array(rows, dtype=float), np.array(rhs, dtype=float)
    U, S, Vt = np.linalg.svd(A)
    rank = int(np.sum(S > eps * max(1.0, S[0])))
    z0 = Vt[:rank].T @ ((U[:, :rank].T @ b) / S[:rank])
    if np.linalg.norm(A @ z0 - b) > 1e-6 * max(1.0, np.linalg.norm(b)):
        return [], False
    null = Vt[rank:]
    if len(null) == 0:
        cands = [z0]
    elif len(null) == 1:
        nv = null[0]
        a2 = nv[:3] @ nv[:3]
        a1 = 2 * z0[:3] @ nv[:3] - nv[3]
        a0 = z0[:3] @ z0[:3] - z0[3]
        if abs(a2) < eps and abs(a1) < eps:
            return [], abs(a0) < 1e-6
        if abs(a2) < eps:
            ts = [-a0 / a1]
        else:
            disc = a1 * a1 - 4 * a2 * a0
            if disc < -1e-6:
                return [], False
            disc = max(disc, 0.0)
            ts = [(-a1 + disc**0.5) / (2 * a2), (-a1 - disc**0.5) / (2 * a2)]
        cands = [z0 + t * nv for t in ts]
    else:
        return [], True  # screened in high precision
    return [list(z) for z in cands if abs(z[:3] @ z[:3] - z[3]) < 1e-6], False


def _few_distances(pts, q, max_distances: int, rel: float = 1e-6) -> bool:
    q = [float(c) for c in q]
    vals = set()
    allp = [list(p) for p in pts] + [q]
    ds = sorted(sum((a - b) ** 2 for a, b in zip(p, r)) for i, p in enumerate(allp) for r in allp[i + 1:])
    if ds[0] < rel:
        return False
    count = 1
    for a, b in zip(ds, ds[1:]):
        if b - a > rel * max(1.0, b):
            count += 1
    return count <= max_distances


def _solve_leaf(pts, known, labels, s, m, eps):
    """Isolated solutions ``(q, r, nu)`` of the labelled linear system with
    ``r = |q|^2``, and whether a real curve of solutions exists as well."""
    import mpmath

    rows, rhs = _leaf_system(pts, known, labels, s)
    nvar = len(rows[0])
    A = mpmath.matrix(rows)
    b = mpmath.matrix(rhs)
    U, S, V = mpmath.svd_r(A)
    rank = sum(1 for k in range(min(A.rows, A.cols)) if S[k] > eps * max(1, S[0]))
    # least squares particular solution and null space
    Ut_b = U.T * b
    z0 = mpmath.matrix(nvar, 1)
    for k in range(rank):
        coef = Ut_b[k] / S[k]
        for j in range(nvar):
            z0[j] += coef * V[k, j]
    resid = mpmath.norm(A * z0 - b)
    if resid > eps * 100:
        return [], False
    null = [[V[k, j] for j in range(nvar)] for k in range(rank, nvar)]
    sols = []
    if not null:
        cands = [z0]
    elif len(null) == 1:
        nv = null[0]
        # r(t) = |q(t)|^2 with z = z0 + t nv
        qa = [z0[k] for k in range(3)]
        qb = [nv[k] for k in range(3)]
        a2 = sum(x * x for x in qb)
        a1 = 2 * sum(x * y for x, y in zip(qa, qb)) - nv[3]
        a0 = sum(x * x for x in qa) - z0[3]
        if abs(a2) < eps and abs(a1) < eps:
            return [], abs(a0) < eps  # a whole line, or nothing
        if abs(a2) < eps:
            ts = [-a0 / a1]
        else:
            disc = a1 * a1 - 4 * a2 * a0
            if disc < -eps:
                return [], False
            disc = max(disc, 0)
            ts = [(-a1 + mpmath.sqrt(disc)) / (2 * a2), (-a1 - mpmath.sqrt(disc)) / (2 * a2)]
        cands = [z0 + t * mpmath.matrix(nv) for t in ts]
    elif len(null) == 2:
        kind, pt = _plane_paraboloid(z0, null, eps)
        if kind == "curve":
            return [], True
        cands = [pt] if kind == "point" else []
    else:
        return [], True
    for z in cands:
        q = [z[0], z[1], z[2]]
        if abs(q[0] ** 2 + q[1] ** 2 + q[2] ** 2 - z[3]) > eps * 100:
            continue
        sols.append([z[k] for k in range(nvar)])
    return sols, False


def _plane_paraboloid(z0, null, eps):
    """Meet the plane ``z0 + s n1 + t n2`` with ``r = |q|^2``.

    Returns ``(kind, point)`` with kind ``"empty"``, ``"point"`` or ``"curve"``.
    """
    import mpmath

    n1, n2 = null
    # f(s, t) = |q|^2 - r = [s t] A [s t]^T + 2 b.[s t] + c
    A = mpmath.matrix(2, 2)
    vs = (n1, n2)
    for i in range(2):
        for j in range(2):
            A[i, j] = sum(vs[i][k] * vs[j][k] for k in range(3))
    b = mpmath.matrix([sum(z0[k] * vs[i][k] for k in range(3)) - vs[i][3] / 2 for i in range(2)])
    c = sum(z0[k] ** 2 for k in range(3)) - z0[3]
    if mpmath.det(A) <= eps:
        return "curve", None
    st = -(mpmath.inverse(A) * b)
    fmin = c + (b.T * st)[0]
    if fmin > eps:
        return "empty", None
    if fmin < -eps:
        return "curve", None
    return "point", z0 + st[0] * mpmath.matrix(n1) + st[1] * mpmath.matrix(n2)


def _certify(pts, q, max_distances: int, dps: int) -> bool:
    """Interval check that ``X + {q}`` has at most ``max_distances`` distances."""
    import mpmath

    allp = [list(p) for p in pts] + [list(q)]
    r = mpmath.mpf(10) ** (-dps // 2)
    X = PointSet.numeric(allp, radius=r)
    try:
        vals = distance_values(X)
    except ValueError:
        return False
    return len(vals) <= max_distances
