"""Exact graph algorithms on small simple graphs.

Graphs are stored as per-vertex adjacency bitmasks.  Loops are kept in a
separate vertex set and never appear in the adjacency masks; only the
extension graphs of :mod:`fivedist.extend` use them.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from typing import Iterable, Sequence

__all__ = [
    "Graph",
    "UNREACHABLE",
    "independence_number",
    "clique_number",
    "max_independent_set",
    "max_clique",
    "has_cycle_of_length",
    "has_short_odd_cycle",
    "cayley_graph",
    "cycle_graph",
    "path_graph",
    "petersen_graph",
    "shortest_path_distances",
    "canonical_form",
    "canonical_labeling",
    "canonical_matrix",
    "are_isomorphic",
    "to_graph6",
    "from_graph6",
    "to_dot",
]

UNREACHABLE = math.inf
MAX_VERTICES = 1 << 16


class Graph:
    """Undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "loops")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), loops: Iterable[int] = ()):
        if not 0 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count {n} out of range")
        self.n = n
        adj = [0] * n
        loop_set = set(loops)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                loop_set.add(u)
                continue
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj = tuple(adj)
        self.loops = frozenset(loop_set)

    @classmethod
    def from_masks(cls, masks: Sequence[int], loops: Iterable[int] = ()) -> Graph:
        g = cls(len(masks), loops=loops)
        g.adj = tuple(masks)
        return g

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> Graph:
        n = len(rows)
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rows[i][j]], [i for i in range(n) if rows[i][i]])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.neighbors(u) if u < v]

    def neighbors(self, v: int) -> list[int]:
        m = self.adj[v]
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def num_edges(self) -> int:
        return sum(bin(m).count("1") for m in self.adj) // 2

    def complement(self) -> Graph:
        full = (1 << self.n) - 1
        return Graph.from_masks([full & ~m & ~(1 << v) for v, m in enumerate(self.adj)])

    def induced(self, vertices: Sequence[int]) -> Graph:
        vertices = list(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u in vertices for v in self.neighbors(u) if v in pos and pos[u] < pos[v]]
        loops = [pos[v] for v in vertices if v in self.loops]
        return Graph(len(vertices), edges, loops)

    def remove_vertex(self, v: int) -> Graph:
        return self.induced([w for w in range(self.n) if w != v])

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()], [perm[v] for v in self.loops])

    def adjacency_matrix(self) -> list[list[int]]:
        return [[1 if (self.adj[i] >> j & 1) or (i == j and i in self.loops) else 0 for j in range(self.n)] for i in range(self.n)]

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        mask = sum(1 << v for v in vs)
        return all(not (self.adj[v] & mask) for v in vs)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for u, v in itertools.combinations(vs, 2))

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= self.adj[low.bit_length() - 1]
                m ^= low
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def components(self) -> list[list[int]]:
        left = set(range(self.n))
        out = []
        while left:
            start = min(left)
            comp = {start}
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for w in self.neighbors(v):
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            left -= comp
            out.append(sorted(comp))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj and self.loops == other.loops

    def __hash__(self) -> int:
        return hash((self.n, self.adj, self.loops))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()}, loops={len(self.loops)})"


# ---------------------------------------------------------------------------
# cliques and independent sets


def _color_sort(P: int, adj: Sequence[int]) -> tuple[list[int], list[int]]:
    """Greedy colouring of the candidate set ``P``.

    Returns vertices in colour order together with the running colour count,
    an upper bound on the clique size available from each prefix.
    """
    order: list[int] = []
    bounds: list[int] = []
    Q = P
    color = 0
    while Q:
        color += 1
        U = Q
        while U:
            low = U & -U
            v = low.bit_length() - 1
            U &= ~low & ~adj[v]
            Q &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique(G: Graph) -> list[int]:
    """A maximum clique, by branch and bound with colouring bounds.

    Branching is deterministic, so the returned witness is reproducible.
    """
    adj = G.adj
    best: list[int] = []

    def expand(R: list[int], P: int) -> None:
        nonlocal best
        order, bounds = _color_sort(P, adj)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + bounds[idx] <= len(best):
                return
            v = order[idx]
            R.append(v)
            newP = P & adj[v]
            if newP:
                expand(R, newP)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << v)

    if G.n:
        expand([], (1 << G.n) - 1)
    return sorted(best)


def clique_number(G: Graph) -> int:
    return len(max_clique(G))


def max_independent_set(G: Graph) -> list[int]:
    return max_clique(G.complement())


def independence_number(G: Graph) -> int:
    return len(max_independent_set(G))


# ---------------------------------------------------------------------------
# cycles


def has_cycle_of_length(G: Graph, k: int) -> bool:
    """True iff ``G`` contains a cycle of length exactly ``k`` (``k >= 3``)."""
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    adj = G.adj
    if k == 3:
        return any(adj[u] & adj[v] for u, v in G.edges())
    n = G.n
    # search for cycles whose smallest vertex is the start
    for s in range(n):
        allowed = ~((1 << (s + 1)) - 1)

        def dfs(v: int, depth: int, used: int) -> bool:
            if depth == k - 1:
                return bool(adj[v] >> s & 1)
            m = adj[v] & allowed & ~used
            while m:
                low = m & -m
                w = low.bit_length() - 1
                if dfs(w, depth + 1, used | low):
                    return True
                m ^= low
            return False

        if dfs(s, 0, 1 << s):
            return True
    return False


def has_short_odd_cycle(G: Graph, k: int) -> bool:
    if k not in (3, 5):
        raise ValueError("k must be 3 or 5")
    if k == 3:
        return has_cycle_of_length(G, 3)
    adj = G.adj
    for v0 in range(G.n):
        for v1 in G.neighbors(v0):
            for v2 in G.neighbors(v1):
                if v2 == v0:
                    continue
                m3 = adj[v2] & ~(1 << v0) & ~(1 << v1)
                while m3:
                    low = m3 & -m3
                    v3 = low.bit_length() - 1
                    m3 ^= low
                    if adj[v3] & adj[v0] & ~(1 << v1) & ~(1 << v2):
                        return True
    return False


# ---------------------------------------------------------------------------
# constructions


def cayley_graph(modulus: int, connection: Iterable[int]) -> Graph:
    """Circulant graph Cay(Z_n, S)."""
    S = {s % modulus for s in connection}
    if 0 in S:
        raise ValueError("connection set must not contain 0")
    if any((-s) % modulus not in S for s in S):
        raise ValueError("connection set must be closed under negation")
    edges = {(min(v, (v + s) % modulus), max(v, (v + s) % modulus)) for v in range(modulus) for s in S}
    return Graph(modulus, edges)


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def shortest_path_distances(G: Graph) -> list[list[float]]:
    """All-pairs BFS distances; unreachable pairs get ``UNREACHABLE``."""
    out = []
    for s in range(G.n):
        dist = [UNREACHABLE] * G.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in G.neighbors(v):
                if dist[w] == UNREACHABLE:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        out.append(dist)
    return out


# ---------------------------------------------------------------------------
# canonical labelling (individualisation / refinement)


def _refine(M: Sequence[Sequence[int]], cells: list[list[int]]) -> list[list[int]]:
    n = len(M)
    while True:
        cell_of = [0] * n
        for ci, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = ci
        sig = {}
        for v in range(n):
            row = M[v]
            cnt = Counter((row[w], cell_of[w]) for w in range(n) if w != v)
            sig[v] = (cell_of[v], row[v], tuple(sorted(cnt.items())))
        new_cells: list[list[int]] = []
        for cell in cells:
            groups: dict = {}
            for v in cell:
                groups.setdefault(sig[v], []).append(v)
            for key in sorted(groups):
                new_cells.append(groups[key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _orbits(n: int, gens: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for v in range(n):
            a, b = find(v), find(g[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def canonical_matrix(M: Sequence[Sequence[int]], vertex_colors: Sequence[int] | None = None) -> tuple[tuple, list[int]]:
    """Canonical relabelling of a symmetric integer matrix.

    Returns ``(certificate, order)`` where ``order[i]`` is the original vertex
    placed at canonical position ``i`` and the certificate is the matrix read
    in that order.  Two matrices get equal certificates iff they differ by a
    simultaneous row/column permutation (respecting ``vertex_colors``).
    """
    n = len(M)
    if n == 0:
        return (), []
    colors = list(vertex_colors) if vertex_colors is not None else [0] * n
    groups: dict = {}
    for v in range(n):
        groups.setdefault(colors[v], []).append(v)
    cells = _refine(M, [groups[c] for c in sorted(groups)])

    best_cert = None
    best_order: list[int] = []
    first: tuple | None = None  # (certificate, order, path) of the first leaf
    automorphisms: list[tuple[int, ...]] = []

    def cert_of(order: list[int]) -> tuple:
        return tuple(M[order[i]][order[j]] for i in range(n) for j in range(i, n))

    def record(order_a: list[int], order_b: list[int]) -> None:
        perm = [0] * n
        for a, b in zip(order_a, order_b):
            perm[a] = b
        if len(automorphisms) < 64:
            automorphisms.append(tuple(perm))

    def search(cells: list[list[int]], path: list[int]) -> int | None:
        """Explore a node; a returned level asks callers to unwind to it."""
        nonlocal best_cert, best_order, first
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            cert = cert_of(order)
            if first is None:
                first = (cert, order, list(path))
            elif cert == first[0]:
                # equivalent to the first leaf: the automorphism fixes the common
                # prefix, so the subtree below it repeats one already explored
                record(first[1], order)
                common = 0
                while common < len(path) and path[common] == first[2][common]:
                    common += 1
                if best_cert is None or cert > best_cert:
                    best_cert, best_order = cert, order
                return common
            if best_cert is None or cert > best_cert:
                best_cert, best_order = cert, order
            elif cert == best_cert:
                record(best_order, order)
            return None
        ti = cells.index(target)
        tried: list[int] = []
        seen_auts = -1
        orb: list[int] = []
        depth = len(path)
        for v in sorted(target):
            if tried:
                if seen_auts != len(automorphisms):
                    seen_auts = len(automorphisms)
                    stab = [g for g in automorphisms if all(g[p] == p for p in path)]
                    orb = _orbits(n, stab) if stab else list(range(n))
                if any(orb[v] == orb[t] for t in tried):
                    continue
            rest = [w for w in target if w != v]
            new_cells = cells[:ti] + [[v], rest] + cells[ti + 1:]
            jump = search(_refine(M, new_cells), path + [v])
            tried.append(v)
            if jump is not None and jump < depth:
                return jump
        return None

    search(cells, [])
    return best_cert, best_order


def canonical_labeling(G: Graph) -> list[int]:
    _, order = canonical_matrix(G.adjacency_matrix())
    return order


def canonical_form(G: Graph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic."""
    cert, _ = canonical_matrix(G.adjacency_matrix())
    return f"{G.n}:".encode() + bytes(cert)


def are_isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or G.num_edges() != H.num_edges() or len(G.loops) != len(H.loops):
        return False
    if sorted(G.degree(v) for v in range(G.n)) != sorted(H.degree(v) for v in range(H.n)):
        return False
    return canonical_form(G) == canonical_form(H)


# ---------------------------------------------------------------------------
# interchange


def to_graph6(G: Graph) -> bytes:
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(G.n))
    h.add_edges_from(G.edges())
    return nx.to_graph6_bytes(h, header=False).strip()


def from_graph6(data: bytes | str) -> Graph:
    import networkx as nx

    if isinstance(data, str):
        data = data.encode()
    h = nx.from_graph6_bytes(data.strip())
    return Graph(h.number_of_nodes(), h.edges())


def to_dot(G: Graph, name: str = "G", labels: Sequence[str] | None = None) -> str:
    lines = [f"graph {name} {{"]
    for v in range(G.n):
        label = labels[v] if labels else str(v)
        lines.append(f'  {v} [label="{label}"];')
    for u, v in G.edges():
        lines.append(f"  {u} -- {v};")
    for v in sorted(G.loops):
        lines.append(f"  {v} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
