"""Exact model of the regular dodecahedron with unit edge.

Coordinates, squared distances and eigenmatrices live in Q(sqrt5).  Vertices
are numbered 0..19 in lexicographic order of their coordinates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .exact import ExactMatrix, QNum, SQRT5, TAU, ONE, ZERO, matrix_det, matrix_rank, phi, phi_matrix, qnum, qnum_sign
from .graphs import Graph, independence_number, shortest_path_distances

__all__ = [
    "DodecaModel",
    "PermGroup",
    "build_dodecahedron",
    "intersection_numbers",
    "eigenvalues",
    "eigenmatrices",
    "spherical_gram",
    "automorphism_group",
    "burnside_116",
    "antipode_free_selections",
    "subset_census",
    "alpha_table",
    "single_orbit",
    "cycles_to_perm",
    "phi_conjugate_subset",
    "PhiConjugate",
    "figure_labeling",
    "FIGURE_PERMUTATIONS",
    "FIGURE_W",
    "CLASS_NAMES",
]

N = 20
CLASS_NAMES = (
    "identity",
    "face-rotation",
    "edge-rotation",
    "vertex-rotation",
    "central-inversion",
    "rotary-reflection",
    "plane-reflection",
    "rotary-reflection-6",
)


@dataclass(frozen=True)
class DodecaModel:
    vertices: tuple[tuple[QNum, QNum, QNum], ...]
    dist2: ExactMatrix
    classes: tuple[QNum, ...]
    cls: tuple[tuple[int, ...], ...]  # cls[x][y] = i when dist2(x, y) = d_i^2
    skeleton: Graph
    antipode: tuple[int, ...]

    def class_graph(self, *idx: int) -> Graph:
        """Graph on the vertices joining pairs whose distance class is in ``idx``."""
        edges = [(x, y) for x in range(N) for y in range(x + 1, N) if self.cls[x][y] in idx]
        return Graph(N, edges)

    def distance_set(self, subset) -> set[QNum]:
        s = sorted(subset)
        return {self.dist2[x, y] for i, x in enumerate(s) for y in s[i + 1:]}

    def class_set(self, subset) -> set[int]:
        s = sorted(subset)
        return {self.cls[x][y] for i, x in enumerate(s) for y in s[i + 1:]}


def _sq(p, q) -> QNum:
    return sum(((a - b) * (a - b) for a, b in zip(p, q)), ZERO)


@lru_cache(maxsize=1)
def build_dodecahedron() -> DodecaModel:
    t, it = TAU, TAU - 1  # 1/tau = tau - 1
    raw = []
    for sx, sy, sz in itertools.product((1, -1), repeat=3):
        raw.append((qnum(sx), qnum(sy), qnum(sz)))
    for s1, s2 in itertools.product((1, -1), repeat=2):
        raw.append((ZERO, it * s1, t * s2))
        raw.append((it * s1, t * s2, ZERO))
        raw.append((t * s1, ZERO, it * s2))
    # the standard model has edge 2/tau; scale by tau/2
    k = TAU / 2
    pts = sorted((tuple(c * k for c in p) for p in raw), key=lambda p: tuple((float(c), str(c)) for c in p))
    pts = tuple(pts)
    d2 = ExactMatrix([[_sq(p, q) for q in pts] for p in pts])
    values = sorted({d2[i, j] for i in range(N) for j in range(i + 1, N)})
    if len(values) != 5 or values[0] != ONE:
        raise AssertionError("dodecahedron construction lost its five distances")
    index = {v: i + 1 for i, v in enumerate(values)}
    cls = tuple(tuple(0 if i == j else index[d2[i, j]] for j in range(N)) for i in range(N))
    skeleton = Graph(N, [(i, j) for i in range(N) for j in range(i + 1, N) if cls[i][j] == 1])
    neg = {p: i for i, p in enumerate(pts)}
    antipode = tuple(neg[tuple(-c for c in p)] for p in pts)
    return DodecaModel(pts, d2, tuple(values), cls, skeleton, antipode)


# ---------------------------------------------------------------------------
# association scheme


def intersection_numbers(model: DodecaModel) -> dict[tuple[int, int, int], int]:
    """``p[i, j, k]``, raising if it depends on the chosen pair of class ``k``."""
    cls = model.cls
    out: dict[tuple[int, int, int], int] = {}
    for x in range(N):
        for y in range(N):
            k = cls[x][y]
            counts: dict[tuple[int, int], int] = {}
            for z in range(N):
                key = (cls[x][z], cls[z][y])
                counts[key] = counts.get(key, 0) + 1
            for i in range(6):
                for j in range(6):
                    c = counts.get((i, j), 0)
                    prev = out.setdefault((i, j, k), c)
                    if prev != c:
                        raise ValueError("graph is not distance-regular")
    return out


def _tridiagonal(p) -> list[tuple[int, int, int]]:
    """(c_i, a_i, b_i) for i = 0..5."""
    return [(p[(1, i - 1, i)] if i else 0, p[(1, i, i)], p[(1, i + 1, i)] if i < 5 else 0) for i in range(6)]


def eigenvalues(model: DodecaModel) -> list[QNum]:
    """Eigenvalues of the skeleton, found exactly in Q(sqrt5).

    They are algebraic integers, so each has the form (m + n sqrt5)/2 with
    bounded m, n; every candidate is tested against det(L - theta I) = 0 for
    the tridiagonal intersection matrix L.
    """
    p = intersection_numbers(model)
    cab = _tridiagonal(p)
    k = cab[0][2]
    L = [[ZERO] * 6 for _ in range(6)]
    for i, (c, a, b) in enumerate(cab):
        L[i][i] = qnum(a)
        if i:
            L[i - 1][i] = qnum(c)
        if i < 5:
            L[i + 1][i] = qnum(b)
    found = []
    bound = 2 * k
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            if (m - n) % 2:
                continue
            theta = QNum(m, n) / 2
            if abs(float(theta)) > k or abs(float(phi(theta))) > k:
                continue
            M = ExactMatrix([[L[i][j] - (theta if i == j else ZERO) for j in range(6)] for i in range(6)])
            if matrix_det(M) == ZERO:
                found.append(theta)
    if len(found) != 6:
        raise ValueError(f"expected 6 eigenvalues in Q(sqrt5), found {len(found)}")
    return found


def _standard_sequence(theta: QNum, cab) -> list[QNum]:
    k = cab[0][2]
    u = [ONE, theta / k]
    for i in range(1, 5):
        c, a, b = cab[i]
        u.append(((theta - a) * u[i] - c * u[i - 1]) / b)
    return u


@lru_cache(maxsize=1)
def _scheme():
    model = build_dodecahedron()
    p = intersection_numbers(model)
    cab = _tridiagonal(p)
    valency = [p[(i, i, 0)] for i in range(6)]
    rows = []
    for theta in eigenvalues(model):
        u = _standard_sequence(theta, cab)
        norm = sum((u[i] * u[i] * valency[i] for i in range(6)), ZERO)
        mult = qnum(N) / norm
        rows.append((theta, mult, u))
    # trivial first, then by multiplicity, larger |theta| first, then larger theta
    rows.sort(key=lambda r: (r[0] != valency[1], float(r[1]), -abs(float(r[0])), -float(r[0])))
    return valency, rows


def eigenmatrices(model: DodecaModel | None = None) -> tuple[ExactMatrix, ExactMatrix, list[QNum]]:
    """First and second eigenmatrices ``(P, Q, thetas)``.

    Rows of ``Q`` are distance classes 0..5 and column ``j`` belongs to the
    eigenvalue ``thetas[j]``; ``P`` is its transpose-dual with ``QP = 20 I``.
    """
    valency, rows = _scheme()
    P = ExactMatrix([[u[i] * valency[i] for i in range(6)] for _, _, u in rows])
    Q = ExactMatrix([[rows[j][1] * rows[j][2][i] for j in range(6)] for i in range(6)])
    if Q @ P != ExactMatrix.identity(6).scale(N):
        raise AssertionError("QP != 20 I")
    return P, Q, [r[0] for r in rows]


@lru_cache(maxsize=8)
def spherical_gram(j: int) -> ExactMatrix:
    """Primitive idempotent ``E_j`` (1-based column index of ``Q``)."""
    model = build_dodecahedron()
    _, Q, _ = eigenmatrices(model)
    if not 1 <= j <= 6:
        raise ValueError("idempotent index must be in 1..6")
    col = [Q[i, j - 1] for i in range(6)]
    if col[0] != qnum(3):
        raise ValueError(f"E_{j} has rank {col[0]}, not 3")
    return ExactMatrix([[col[model.cls[x][y]] / N for y in range(N)] for x in range(N)])


# ---------------------------------------------------------------------------
# automorphisms


@dataclass
class PermGroup:
    elements: list[tuple[int, ...]]
    classes: dict[str, list[tuple[int, ...]]] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    def class_of(self, g: tuple[int, ...]) -> str:
        for name, members in self.classes.items():
            if g in members:
                return name
        raise KeyError(g)

    def generators(self) -> list[tuple[int, ...]]:
        """A small generating set, picked greedily."""
        gens: list[tuple[int, ...]] = []
        span = {tuple(range(N))}
        for g in self.elements:
            if g in span:
                continue
            gens.append(g)
            span = _closure(gens)
            if len(span) == self.order:
                break
        return gens


def _compose(g, h) -> tuple[int, ...]:
    """``g`` after ``h``."""
    return tuple(g[h[x]] for x in range(len(h)))


def _closure(gens) -> set[tuple[int, ...]]:
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = _compose(g, a)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def _order(g) -> int:
    ident = tuple(range(len(g)))
    h, k = g, 1
    while h != ident:
        h, k = _compose(g, h), k + 1
    return k


def _class_preserving_maps(cls_a, cls_b, n: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """All bijections ``f`` with ``cls_b[f(x)][f(y)] == cls_a[x][y]``."""
    out: list[tuple[int, ...]] = []
    image = [-1] * n
    used = [False] * n

    def extend(x: int) -> bool:
        if x == n:
            out.append(tuple(image))
            return limit is not None and len(out) >= limit
        for y in range(n):
            if used[y]:
                continue
            if all(cls_b[image[w]][y] == cls_a[w][x] for w in range(x)):
                image[x], used[y] = y, True
                if extend(x + 1):
                    return True
                used[y] = False
        image[x] = -1
        return False

    extend(0)
    return out


def _det3(m) -> QNum:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _linear_det(model: DodecaModel, g) -> QNum:
    """Determinant of the linear map sending each vertex ``x`` to ``g(x)``."""
    basis = None
    for a, b, c in itertools.combinations(range(N), 3):
        d = _det3([model.vertices[a], model.vertices[b], model.vertices[c]])
        if d != ZERO:
            basis = (a, b, c)
            break
    src = _det3([model.vertices[v] for v in basis])
    dst = _det3([model.vertices[g[v]] for v in basis])
    return dst / src


@lru_cache(maxsize=1)
def automorphism_group() -> PermGroup:
    model = build_dodecahedron()
    elements = _class_preserving_maps(model.cls, model.cls, N)
    classes: dict[str, list[tuple[int, ...]]] = {name: [] for name in CLASS_NAMES}
    for g in elements:
        det = _linear_det(model, g)
        o = _order(g)
        if det == ONE:
            name = {1: "identity", 5: "face-rotation", 2: "edge-rotation", 3: "vertex-rotation"}[o]
        elif det == -ONE:
            if g == model.antipode:
                name = "central-inversion"
            else:
                name = {10: "rotary-reflection", 2: "plane-reflection", 6: "rotary-reflection-6"}[o]
        else:
            raise AssertionError("automorphism is not orthogonal")
        classes[name].append(g)
    return PermGroup(elements, classes)


# ---------------------------------------------------------------------------
# 8-point subsets


def antipode_free_selections(model: DodecaModel | None = None) -> list[int]:
    """Bitmasks of all 8-subsets containing no antipodal pair."""
    model = model or build_dodecahedron()
    pairs = sorted({tuple(sorted((x, model.antipode[x]))) for x in range(N)})
    out = []
    for chosen in itertools.combinations(pairs, 8):
        for picks in itertools.product((0, 1), repeat=8):
            mask = 0
            for pair, side in zip(chosen, picks):
                mask |= 1 << pair[side]
            out.append(mask)
    return out


def _mask_image(g, mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << g[low.bit_length() - 1]
        mask ^= low
    return out


def burnside_116() -> dict:
    """Fixed-selection counts per class, the Burnside average and a direct orbit count."""
    model = build_dodecahedron()
    group = automorphism_group()
    sels = antipode_free_selections(model)
    per_class: dict[str, list[int]] = {}
    total = 0
    for name in CLASS_NAMES:
        counts = []
        for g in group.classes[name]:
            c = sum(1 for s in sels if _mask_image(g, s) == s)
            counts.append(c)
            total += c
        per_class[name] = counts
    if total % group.order:
        raise AssertionError("Burnside sum not divisible by |G|")
    # direct orbit partition with union-find over the generators
    index = {s: i for i, s in enumerate(sels)}
    parent = list(range(len(sels)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in group.generators():
        for i, s in enumerate(sels):
            j = index[_mask_image(g, s)]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    orbits = len({find(i) for i in range(len(sels))})
    return {
        "selections": len(sels),
        "class_sizes": {name: len(group.classes[name]) for name in CLASS_NAMES},
        "fixed": {name: sorted(set(v)) for name, v in per_class.items()},
        "fixed_per_element": {name: v[0] if len(set(v)) == 1 else None for name, v in per_class.items()},
        "burnside": total // group.order,
        "orbits": orbits,
    }


def subset_census(k: int = 8) -> dict:
    """Count ``k``-subsets by number of distinct distances.

    Also reports the antipode-free check for the 4-distance subsets and the
    3-distance subsets themselves.
    """
    if not 0 <= k <= N:
        raise ValueError("k must be in 0..20")
    model = build_dodecahedron()
    masks = [[0] * N for _ in range(6)]
    for x in range(N):
        for y in range(N):
            if x != y:
                masks[model.cls[x][y]][x] |= 1 << y
    counts: dict[int, int] = {}
    by_size: dict[int, list[int]] = {}
    antipodal_ok = True
    anti = model.antipode
    for combo in itertools.combinations(range(N), k):
        S = 0
        for v in combo:
            S |= 1 << v
        present = 0
        for c in range(1, 6):
            m = masks[c]
            for v in combo:
                if m[v] & S:
                    present += 1
                    break
        counts[present] = counts.get(present, 0) + 1
        if present <= 3:
            by_size.setdefault(present, []).append(S)
        if k == 8:
            free = all(not (S >> anti[v] & 1) for v in combo)
            if free != (present == 4):
                antipodal_ok = False
    return {
        "k": k,
        "total": comb(N, k),
        "counts": dict(sorted(counts.items())),
        "small": {s: [[v for v in range(N) if m >> v & 1] for m in ms] for s, ms in by_size.items()},
        "four_iff_antipode_free": antipodal_ok if k == 8 else None,
    }


def alpha_table() -> dict[str, int]:
    model = build_dodecahedron()
    spec = {"2": (2,), "3": (3,), "1,5": (1, 5), "4,5": (4, 5), "1,4": (1, 4)}
    return {key: independence_number(model.class_graph(*idx)) for key, idx in spec.items()}


def single_orbit(subsets: list[list[int]]) -> bool:
    group = automorphism_group()
    if not subsets:
        return True
    start = frozenset(subsets[0])
    orbit = {frozenset(g[v] for v in start) for g in group.elements}
    return all(frozenset(s) in orbit for s in subsets)


# ---------------------------------------------------------------------------
# conjugation


@dataclass
class PhiConjugate:
    source: list[int]
    image: list[int]
    matrix: ExactMatrix
    color_map: dict[int, int]


def phi_conjugate_subset(subset) -> PhiConjugate:
    """Find ``X'`` with ``E_2[X'] = phi(E_2[X])`` (ordered as ``X``)."""
    model = build_dodecahedron()
    X = list(subset)
    if not all(0 <= v < N for v in X) or len(set(X)) != len(X):
        raise ValueError("subset must list distinct vertex indices")
    E2 = spherical_gram(2)
    target = phi_matrix(E2.submatrix(X))
    n = len(X)
    image: list[int] = []

    def extend(i: int) -> bool:
        if i == n:
            return True
        for y in range(N):
            if y in image:
                continue
            if E2[y, y] != target[i, i]:
                continue
            if all(E2[image[w], y] == target[w, i] for w in range(i)):
                image.append(y)
                if extend(i + 1):
                    return True
                image.pop()
        return False

    if not extend(0):
        raise ValueError("no dodecahedron subset realizes the conjugate Gram matrix")
    cmap: dict[int, int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            a, b = model.cls[X[i]][X[j]], model.cls[image[i]][image[j]]
            if cmap.setdefault(a, b) != b:
                raise AssertionError("conjugate is not a recoloring")
    return PhiConjugate(X, list(image), target, dict(sorted(cmap.items())))


# ---------------------------------------------------------------------------
# labels of the published figure

FIGURE_PERMUTATIONS = {
    "sigma1": [(1, 2, 3, 4, 5), (6, 7, 8, 9, 10), (11, 15, 14, 13, 12), (16, 20, 19, 18, 17)],
    "sigma2": [(1, 2), (3, 6), (5, 7), (4, 12), (10, 11), (8, 13), (9, 17), (14, 16), (15, 18), (19, 20)],
    "sigma3": [(2, 5, 6), (3, 10, 12), (4, 13, 7), (8, 14, 17), (9, 18, 11), (15, 19, 16)],
    "tau": [(1, 20), (2, 19), (3, 18), (4, 17), (5, 16), (6, 15), (7, 14), (8, 13), (9, 12), (10, 11)],
    "tau_sigma2": [(1, 19), (2, 20), (3, 15), (4, 9), (5, 14), (6, 18), (7, 16), (12, 17)],
}
FIGURE_W = (6, 12, 17, 18, 13, 16, 19, 1)


def cycles_to_perm(cycles, n: int = N) -> tuple[int, ...]:
    """1-based cycle notation to a 0-based image tuple."""
    g = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            g[a - 1] = b - 1
    return tuple(g)


def figure_labeling() -> dict:
    """Recover a bijection from figure labels to model vertices.

    The group generated by the published permutations acts on labels; the
    orbital of the pair (1, 2) is taken as the edge relation, and an
    isomorphism of that graph onto the skeleton gives the labelling.
    """
    model = build_dodecahedron()
    gens = [cycles_to_perm(FIGURE_PERMUTATIONS[k]) for k in ("sigma1", "sigma2", "sigma3", "tau")]
    group = _closure(gens)
    edges = {tuple(sorted((g[0], g[1]))) for g in group}
    H = Graph(N, sorted(edges))
    dist = shortest_path_distances(H)
    lab_cls = [[int(dist[x][y]) if dist[x][y] != float("inf") else -1 for y in range(N)] for x in range(N)]
    maps = _class_preserving_maps(lab_cls, model.cls, N, limit=1)
    if not maps:
        raise ValueError("figure labels do not form a dodecahedron")
    f = maps[0]
    inv = {f[x]: x for x in range(N)}
    moved = {name: tuple(f[g[inv[v]]] for v in range(N)) for name, g in ((k, cycles_to_perm(c)) for k, c in FIGURE_PERMUTATIONS.items())}
    aut = set(automorphism_group().elements)
    return {
        "group_order": len(group),
        "edges": len(edges),
        "label_to_vertex": {x + 1: f[x] for x in range(N)},
        "permutations": moved,
        "all_automorphisms": all(m in aut for m in moved.values()),
        "W": [f[w - 1] for w in FIGURE_W],
    }
