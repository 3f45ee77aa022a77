"""Independence bounds for graphs without 3- and 5-cycles.

``f(n)`` is the least independence number of an ``n``-vertex graph with no
cycle of length 3 or 5.  Upper bounds come from explicit witness graphs,
lower bounds from replayable case analyses (:class:`ProofLog`) and, for
``n <= 8``, from exhaustive isomorph-free generation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .graphs import (
    Graph,
    canonical_form,
    cayley_graph,
    cycle_graph,
    has_short_odd_cycle,
    independence_number,
    path_graph,
)

__all__ = [
    "FEntry",
    "FTable",
    "ProofLog",
    "ProofError",
    "TableGapError",
    "in_g_family",
    "verify_witness",
    "min_alpha_deg2",
    "replay_deg_condition",
    "replay_lower_extended",
    "replay_monotone",
    "replay_disconnected20",
    "replay_diameter20",
    "bootstrap_f_table",
    "exhaustive_f_oracle",
    "generate_g_family",
    "verify_proof",
    "WITNESSES",
]

N_MAX = 20


class ProofError(Exception):
    """A replay that was required to succeed did not verify."""

    def __init__(self, message: str, log: "ProofLog | None" = None):
        super().__init__(message)
        self.log = log


class TableGapError(Exception):
    """A replay referenced f-values the table does not certify."""

    def __init__(self, missing: Iterable[int]):
        self.missing = sorted(set(missing))
        super().__init__(f"f-table has no certified lower bound for n in {self.missing}")


# ---------------------------------------------------------------------------
# table


@dataclass
class FEntry:
    lower: int
    upper: int
    witness: str | None = None
    lower_provenance: str = "interpolated"
    upper_provenance: str = "interpolated"

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "witness": self.witness,
            "lower_provenance": self.lower_provenance,
            "upper_provenance": self.upper_provenance,
        }


class FTable:
    """Certified bounds ``lower <= f(n) <= upper`` for ``0 <= n <= N_MAX``."""

    def __init__(self, n_max: int = N_MAX):
        self.n_max = n_max
        self._certified_lower: dict[int, tuple[int, str]] = {0: (0, "trivial")}
        self._certified_upper: dict[int, tuple[int, str, str | None]] = {0: (0, "trivial", None)}
        self.logs: dict[int, ProofLog] = {}

    def certify_lower(self, n: int, value: int, provenance: str, log: "ProofLog | None" = None) -> None:
        old = self._certified_lower.get(n)
        if old is None or value > old[0]:
            self._certified_lower[n] = (value, provenance)
            if log is not None:
                self.logs[n] = log

    def certify_upper(self, n: int, value: int, provenance: str, witness: str | None = None) -> None:
        old = self._certified_upper.get(n)
        if old is None or value < old[0]:
            self._certified_upper[n] = (value, provenance, witness)

    def lower(self, n: int) -> int | None:
        """Best lower bound implied by certified entries and monotonicity."""
        if n < 0:
            return None
        best = None
        for m, (v, _) in self._certified_lower.items():
            if m <= n:
                best = v if best is None else max(best, v)
        # f(n) >= f(m) - (m - n) for m > n
        for m, (v, _) in self._certified_lower.items():
            if m > n:
                cand = v - (m - n)
                best = cand if best is None else max(best, cand)
        return best

    def upper(self, n: int) -> int | None:
        best = None
        for m, (v, _, _) in self._certified_upper.items():
            if m >= n:
                best = v if best is None else min(best, v)
            else:
                cand = v + (n - m)
                best = cand if best is None else min(best, cand)
        return best

    def entry(self, n: int) -> FEntry:
        lo, hi = self.lower(n), self.upper(n)
        lp = self._certified_lower.get(n)
        up = self._certified_upper.get(n)
        return FEntry(
            lower=lo,
            upper=hi,
            witness=up[2] if up and up[0] == hi else None,
            lower_provenance=lp[1] if lp and lp[0] == lo else "interpolated",
            upper_provenance=up[1] if up and up[0] == hi else "interpolated",
        )

    def pinned(self, n: int) -> bool:
        return self.lower(n) is not None and self.lower(n) == self.upper(n)

    def check_invariants(self) -> list[str]:
        problems = []
        for n in range(self.n_max + 1):
            lo, hi = self.lower(n), self.upper(n)
            if lo is not None and hi is not None and lo > hi:
                problems.append(f"f({n}): lower {lo} > upper {hi}")
        for n in range(self.n_max):
            a, b = self.lower(n), self.lower(n + 1)
            if a is not None and b is not None and b < a:
                problems.append(f"lower bound decreases at {n}")
            if self.pinned(n) and self.pinned(n + 1):
                gap = self.lower(n + 1) - self.lower(n)
                if not 0 <= gap <= 1:
                    problems.append(f"f({n + 1}) - f({n}) = {gap}")
        return problems

    def to_dict(self) -> dict:
        return {str(n): self.entry(n).to_dict() for n in range(self.n_max + 1)}


# ---------------------------------------------------------------------------
# proof logs


@dataclass
class ProofLog:
    """One node of a replayable case analysis."""

    rule: str
    claim: str
    params: dict = field(default_factory=dict)
    verdict: bool = False
    children: list["ProofLog"] = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        d = {
            "rule": self.rule,
            "claim": self.claim,
            "params": self.params,
            "verdict": "pass" if self.verdict else "fail",
        }
        if self.note:
            d["note"] = self.note
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ProofLog:
        return cls(
            rule=d["rule"],
            claim=d.get("claim", ""),
            params=dict(d.get("params", {})),
            verdict=d.get("verdict") == "pass",
            children=[cls.from_dict(c) for c in d.get("children", [])],
            note=d.get("note", ""),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ProofLog:
        return cls.from_dict(json.loads(text))

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def failures(self) -> list["ProofLog"]:
        return [node for node in self.walk() if not node.verdict and not node.children]

    def cited(self) -> dict[int, int]:
        """Lower bounds on f cited anywhere in the tree."""
        out: dict[int, int] = {}
        for node in self.walk():
            for m, v in node.params.get("cites", []):
                out[m] = max(out.get(m, v), v)
        return out


# Each checker recomputes a node's verdict from its parameters, the verdicts
# of its (already re-checked) children and the f-table.

def _cite_ok(table: FTable, cites) -> bool:
    return all(table.lower(m) is not None and table.lower(m) >= v for m, v in cites)


def _check_all_children(p, kids, table) -> bool:
    return bool(kids) and all(kids)


def _check_cover(p, kids, table) -> bool:
    lo, hi = p["range"]
    covered = set()
    for c in p["child_covers"]:
        if c is not None:
            covered.update(range(c[0], c[1] + 1))
    return all(kids) and all(k in covered for k in range(lo, hi + 1))


def _check_trivial(p, kids, table) -> bool:
    n, t = p["n"], p["t"]
    return (n >= 1 and t <= 1) or t <= 0


def _check_deg_condition(p, kids, table) -> bool:
    n, t, k1, arg = p["n"], p["t"], p["k1"], p["arg"]
    m = n - k1 - t + 1
    if not (t < n - k1 + 1 and 0 <= arg <= m):
        return False
    if not _cite_ok(table, p.get("cites", [])):
        return False
    return k1 + table.lower(arg) >= t


def _check_monotone_step(p, kids, table) -> bool:
    lo, hi = p["covers"]
    return lo <= hi + 1 and len(kids) == 1 and kids[0]


def _check_neighbourhood(p, kids, table) -> bool:
    return p["covers"][0] >= p["t"]


def _check_no_vertex(p, kids, table) -> bool:
    # a vertex of degree k needs k + 1 <= n vertices
    return p["covers"][0] > p["n"] - 1


def _check_deg2(p, kids, table) -> bool:
    moc = p.get("max_odd_cycles")
    return min_alpha_deg2(p["n"], p["forbid_c3_c5"], moc) >= p["t"]


def _check_closed_nbhd(p, kids, table) -> bool:
    n, t, k = p["n"], p["t"], p["k"]
    if not _cite_ok(table, p.get("cites", [])):
        return False
    lo = table.lower(n - 1 - k)
    return lo is not None and 1 + lo >= t


def _check_layer_count(p, kids, table) -> bool:
    n, t, d, k2 = p["n"], p["t"], p["d"], p["k2"]
    k3 = n - 1 - d - k2
    down = d * k2 - d * (d - 1)
    twice_inner = d * k3 - down
    if k3 < 0 or down < 0 or twice_inner < 0 or twice_inner % 2:
        return True  # the layer sizes cannot occur in a d-regular graph
    inner = twice_inner // 2
    lo = table.lower(k3)
    if lo is not None and d + lo >= t:
        return True
    # fewer than 7 edges: no odd cycle of length >= 7 fits, so bipartite
    return inner <= 6 and d + math.ceil(k3 / 2) >= t


def _check_partition_band(p, kids, table) -> bool:
    n, t = p["n"], p["t"]
    lo, hi = p["covers"]
    a1, a2 = p["arg1"], p["arg2"]
    if not (a1 <= lo and a2 <= n - hi and lo <= hi):
        return False
    if not _cite_ok(table, p.get("cites", [])):
        return False
    return table.lower(a1) + table.lower(a2) >= t


def _check_odd_cycle(p, kids, table) -> bool:
    return math.ceil((p["n"] - p["m"]) / 2) >= p["t"] and all(kids)


def _check_axiom(p, kids, table) -> bool:
    return True


def _check_monotone_table(p, kids, table) -> bool:
    n, src, t = p["n"], p["from"], p["t"]
    return src <= n and _cite_ok(table, p.get("cites", [])) and table.lower(src) >= t


RULES: dict[str, Callable] = {
    "conclusion": _check_all_children,
    "case-split": _check_all_children,
    "degree-cover": _check_cover,
    "trivial": _check_trivial,
    "deg-condition": _check_deg_condition,
    "monotonicity": _check_monotone_step,
    "monotone-table": _check_monotone_table,
    "neighbourhood-independent": _check_neighbourhood,
    "no-such-vertex": _check_no_vertex,
    "degree<=2-case": _check_deg2,
    "closed-neighbourhood": _check_closed_nbhd,
    "layer-count": _check_layer_count,
    "disconnect-partition": _check_partition_band,
    "odd-cycle-removal": _check_odd_cycle,
    "axiom": _check_axiom,
}


def _recheck(node: ProofLog, table: FTable) -> bool:
    kids = [_recheck(c, table) for c in node.children]
    if node.rule == "degree-cover":
        node.params["child_covers"] = [c.params.get("covers") for c in node.children]
    checker = RULES.get(node.rule)
    return bool(checker and checker(node.params, kids, table))


def _finish(node: ProofLog, table: FTable) -> ProofLog:
    for c in node.children:
        _finish(c, table)
    node.verdict = _recheck_node_only(node, table)
    return node


def _recheck_node_only(node: ProofLog, table: FTable) -> bool:
    kids = [c.verdict for c in node.children]
    if node.rule == "degree-cover":
        node.params["child_covers"] = [c.params.get("covers") for c in node.children]
    checker = RULES[node.rule]
    return bool(checker(node.params, kids, table))


def verify_proof(log: ProofLog | dict | str, table: FTable | None = None) -> tuple[bool, list[str]]:
    """Re-check a stored log from scratch.

    Returns ``(ok, problems)``; ``ok`` requires the root to re-verify and
    every stored verdict to agree with its recomputation.
    """
    if isinstance(log, str):
        log = ProofLog.from_json(log)
    elif isinstance(log, dict):
        log = ProofLog.from_dict(log)
    table = table if table is not None else bootstrap_f_table()
    problems: list[str] = []

    def walk(node: ProofLog, path: str) -> bool:
        kids = [walk(c, f"{path}/{i}") for i, c in enumerate(node.children)]
        if node.rule not in RULES:
            problems.append(f"{path}: unknown rule {node.rule!r}")
            return False
        if node.rule == "degree-cover":
            node.params["child_covers"] = [c.params.get("covers") for c in node.children]
        ok = bool(RULES[node.rule](node.params, kids, table))
        if ok != node.verdict:
            problems.append(f"{path} ({node.rule}): stored {node.verdict}, recomputed {ok}")
        return ok

    root_ok = walk(log, "root")
    if not root_ok:
        problems.append("root does not verify")
    return root_ok and not problems, problems


# ---------------------------------------------------------------------------
# witnesses and the degree <= 2 oracle


def in_g_family(G: Graph) -> bool:
    return not has_short_odd_cycle(G, 3) and not has_short_odd_cycle(G, 5)


def verify_witness(n: int, G: Graph, claimed_alpha: int, table: FTable | None = None, name: str | None = None) -> bool:
    """Check ``G`` is a C3/C5-free graph on ``n`` vertices with the claimed alpha."""
    if G.n != n or not in_g_family(G):
        return False
    if independence_number(G) != claimed_alpha:
        return False
    if table is not None:
        table.certify_upper(n, claimed_alpha, "witness", name)
    return True


def _cay17_minus_vertex() -> Graph:
    return cayley_graph(17, [1, -1, 6, -6]).remove_vertex(16)


WITNESSES: dict[int, tuple[str, Callable[[], Graph], int]] = {
    3: ("P3", lambda: path_graph(3), 2),
    5: ("P5", lambda: path_graph(5), 3),
    8: ("C8", lambda: cycle_graph(8), 4),
    10: ("C10", lambda: cycle_graph(10), 5),
    12: ("cayley12", lambda: cayley_graph(12, [1, -1, 6]), 5),
    13: ("C13", lambda: cycle_graph(13), 6),
    16: ("cayley17-minus-vertex", _cay17_minus_vertex, 7),
    17: ("cayley17", lambda: cayley_graph(17, [1, -1, 6, -6]), 7),
}


def min_alpha_deg2(n: int, forbid_c3_c5: bool = True, max_odd_cycles: int | None = 1) -> int:
    """Least alpha of a disjoint union of paths and cycles on ``n`` vertices.

    ``max_odd_cycles`` caps the number of odd cycle components (``None`` for
    no cap); with ``forbid_c3_c5`` the cycles C3 and C5 are excluded.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    cap = n if max_odd_cycles is None else max_odd_cycles
    INF = math.inf
    # best[m][j]: least alpha on m vertices using j odd cycles
    best = [[INF] * (cap + 1) for _ in range(n + 1)]
    best[0][0] = 0
    for m in range(1, n + 1):
        for j in range(cap + 1):
            cand = INF
            for k in range(1, m + 1):
                # path P_k
                if best[m - k][j] < INF:
                    cand = min(cand, best[m - k][j] + (k + 1) // 2)
                # cycle C_k
                if k >= 3 and not (forbid_c3_c5 and k in (3, 5)):
                    if k % 2 == 0:
                        if best[m - k][j] < INF:
                            cand = min(cand, best[m - k][j] + k // 2)
                    elif j >= 1 and best[m - k][j - 1] < INF:
                        cand = min(cand, best[m - k][j - 1] + k // 2)
            best[m][j] = cand
    return int(min(best[n]))


# ---------------------------------------------------------------------------
# replays


def _deg_node(n: int, t: int, k1: int, table: FTable, arg: int | None = None) -> ProofLog:
    m = n - k1 - t + 1
    arg = m if arg is None else arg
    lo = table.lower(arg) if arg >= 0 else None
    cites = [[arg, lo]] if lo is not None else []
    node = ProofLog(
        "deg-condition",
        f"a vertex of degree {k1} forces alpha >= {k1} + f({arg}) >= {t}",
        {"n": n, "t": t, "k1": k1, "arg": arg, "covers": [k1, k1], "cites": cites},
    )
    if arg >= 0 and lo is None:
        raise TableGapError([arg])
    return node


def _degree_cases(n: int, t: int, table: FTable, first: int = 3) -> list[ProofLog]:
    """Cases "some vertex has degree k1" for ``first <= k1 <= n - 1``."""
    nodes: list[ProofLog] = []
    hi = n - 1
    if first > hi:
        return [ProofLog("no-such-vertex", f"no vertex of degree >= {first} on {n} vertices", {"n": n, "covers": [first, hi]})]
    if first >= t:
        return [ProofLog("neighbourhood-independent", f"neighbourhood of size >= {first} is independent", {"t": t, "covers": [first, hi]})]
    base = _deg_node(n, t, first, table)
    nodes.append(base)
    mono_hi = min(n - t, hi)
    if mono_hi > first:
        mono = ProofLog(
            "monotonicity",
            f"k1 + f(n - k1 - t + 1) is nondecreasing in k1 for {first} <= k1 <= {mono_hi}",
            {"n": n, "t": t, "covers": [first + 1, mono_hi], "fact": "0 <= f(n+1) - f(n) <= 1"},
            children=[_deg_node(n, t, first, table)],
        )
        nodes.append(mono)
    nb_lo = max(t, first + 1)
    if nb_lo <= hi:
        nodes.append(ProofLog("neighbourhood-independent", f"neighbourhood of size >= {nb_lo} is independent", {"t": t, "covers": [nb_lo, hi]}))
    return nodes


def replay_deg_condition(n: int, t: int, table: FTable) -> ProofLog:
    """Replay the degree-condition argument for ``f(n) >= t``.

    Checks a vertex of degree 3 through the degree condition, larger degrees
    by monotonicity, and the all-degrees-at-most-2 case through
    :func:`min_alpha_deg2` with no cap on odd cycles (``f`` ranges over all
    C3/C5-free graphs, not only diameter graphs).
    """
    high = ProofLog(
        "degree-cover",
        f"some vertex has degree k1 >= 3",
        {"range": [3, n - 1]},
        children=_degree_cases(n, t, table),
    )
    low = ProofLog(
        "degree<=2-case",
        "every component is a path or a cycle (no C3, C5)",
        {"n": n, "t": t, "forbid_c3_c5": True, "max_odd_cycles": None},
    )
    root = ProofLog("case-split", f"f({n}) >= {t}", {"n": n, "t": t}, children=[high, low])
    return _finish(root, table)


def replay_lower_extended(n: int, t: int, table: FTable) -> ProofLog:
    """Lower bound ``f(n) >= t`` with a finer split on vertex degrees.

    Degrees ``>= 4`` go through the degree condition, a vertex of degree
    ``<= 2`` through deleting its closed neighbourhood, and the remaining
    3-regular case through counting edges between distance layers.
    """
    high = ProofLog(
        "degree-cover",
        "some vertex has degree k1 >= 4",
        {"range": [4, n - 1]},
        children=_degree_cases(n, t, table, first=4),
    )
    small = []
    for k in range(3):
        m = n - 1 - k
        lo = table.lower(m)
        if lo is None:
            raise TableGapError([m])
        small.append(
            ProofLog(
                "closed-neighbourhood",
                f"a vertex of degree {k} gives alpha >= 1 + f({m})",
                {"n": n, "t": t, "k": k, "cites": [[m, lo]]},
            )
        )
    low = ProofLog("case-split", "some vertex has degree <= 2", {}, children=small)
    if 3 >= t:
        cubic = ProofLog("neighbourhood-independent", "3-regular", {"t": t, "covers": [3, 3]})
    else:
        layers = [
            ProofLog(
                "layer-count",
                f"3-regular, |Gamma_2(v)| = {k2}",
                {"n": n, "t": t, "d": 3, "k2": k2},
            )
            for k2 in range(0, t - 1)
        ]
        cubic = ProofLog(
            "case-split",
            f"3-regular: {{v}} + Gamma_2(v) independent, so |Gamma_2(v)| <= {t - 2}",
            {},
            children=layers,
        )
    root = ProofLog("case-split", f"f({n}) >= {t}", {"n": n, "t": t, "strategy": "extended"}, children=[high, low, cubic])
    return _finish(root, table)


def replay_monotone(n: int, src: int, t: int, table: FTable) -> ProofLog:
    lo = table.lower(src)
    node = ProofLog(
        "monotone-table",
        f"f({n}) >= f({src}) >= {t}",
        {"n": n, "from": src, "t": t, "cites": [[src, lo]] if lo is not None else []},
    )
    return _finish(node, table)


def _require(table: FTable, ns: Iterable[int]) -> None:
    missing = [m for m in ns if table.lower(m) is None]
    if missing:
        raise TableGapError(missing)


def replay_disconnected20(table: FTable) -> ProofLog:
    """Disconnected C3/C5-free graphs on 20 vertices have alpha >= 8."""
    _require(table, [10, 5, 15, 3, 17, 1])
    bands = [
        (10, 15, 10, 5),
        (16, 16, 15, 3),
        (17, 19, 17, 1),
    ]
    kids = []
    for lo, hi, a1, a2 in bands:
        kids.append(
            ProofLog(
                "disconnect-partition",
                f"{lo} <= n1 <= {hi}: alpha >= f({a1}) + f({a2})",
                {"n": 20, "t": 8, "covers": [lo, hi], "arg1": a1, "arg2": a2, "cites": [[a1, table.lower(a1)], [a2, table.lower(a2)]]},
            )
        )
    root = ProofLog(
        "degree-cover",
        "G disconnected with parts n1 >= n2, both C3/C5-free",
        {"range": [10, 19]},
        children=kids,
    )
    return _finish(root, table)


def replay_diameter20(table: FTable) -> ProofLog:
    """Every diameter graph of 20 points in R^3 has alpha >= 8."""
    _require(table, [5, 8, 10])
    dol = ProofLog("axiom", "two odd cycles of a diameter graph in R^3 share a vertex", {"name": "Dol'nikov"})
    odd = ProofLog(
        "case-split",
        "G contains a 3-cycle or a 5-cycle",
        {},
        children=[
            ProofLog("odd-cycle-removal", f"odd cycle of length {m}", {"n": 20, "m": m, "t": 8}, children=[ProofLog("axiom", dol.claim, dict(dol.params))])
            for m in (3, 5)
        ],
    )
    degree_nodes = [
        ProofLog("neighbourhood-independent", "Gamma_1(v) independent", {"t": 8, "covers": [8, 19]}),
    ]
    for k1 in (5, 6, 7):
        degree_nodes.append(_deg_node(20, 8, k1, table, arg=5))
    degree_nodes.append(_deg_node(20, 8, 4, table, arg=8))
    degree_nodes.append(_deg_node(20, 8, 3, table, arg=10))
    high = ProofLog("degree-cover", "G connected, C3/C5-free, some vertex of degree >= 3", {"range": [3, 19]}, children=degree_nodes)
    low = ProofLog(
        "degree<=2-case",
        "all degrees <= 2 and at most one odd cycle",
        {"n": 20, "t": 8, "forbid_c3_c5": True, "max_odd_cycles": 1},
        children=[ProofLog("axiom", dol.claim, dict(dol.params))],
    )
    root = ProofLog(
        "case-split",
        "alpha(DG(X)) >= 8 for |X| = 20 in R^3",
        {"n": 20, "t": 8},
        children=[odd, replay_disconnected20(table), high, low],
    )
    return _finish(root, table)


# ---------------------------------------------------------------------------
# exhaustive generation


def generate_g_family(n: int) -> list[Graph]:
    """All C3/C5-free graphs on ``n`` vertices up to isomorphism.

    Every graph in the family stays in it after deleting a vertex, so the
    level-``n`` graphs are obtained by attaching a new vertex to every
    level-``(n-1)`` representative in all possible ways, keeping one graph per
    canonical form.
    """
    level = {canonical_form(Graph(0)): Graph(0)}
    for m in range(1, n + 1):
        nxt: dict[bytes, Graph] = {}
        for G in level.values():
            for mask in range(1 << (m - 1)):
                nbrs = [v for v in range(m - 1) if mask >> v & 1]
                # the new vertex must not close a triangle or a 5-cycle
                if any(G.has_edge(a, b) for i, a in enumerate(nbrs) for b in nbrs[i + 1:]):
                    continue
                H = Graph(m, G.edges() + [(v, m - 1) for v in nbrs])
                if has_short_odd_cycle(H, 5):
                    continue
                key = canonical_form(H)
                if key not in nxt:
                    nxt[key] = H
        level = nxt
    return list(level.values())


def exhaustive_f_oracle(n: int) -> int:
    if n > 8:
        raise ValueError("exhaustive oracle is limited to n <= 8")
    if n < 0:
        raise ValueError("n must be non-negative")
    return min(independence_number(G) for G in generate_g_family(n))


# ---------------------------------------------------------------------------
# bootstrap


def bootstrap_f_table(n_max: int = N_MAX) -> FTable:
    """Certified f-table for n <= ``n_max``.

    Raises :class:`ProofError` carrying the failing log if a replay that the
    table depends on does not verify.
    """
    table = FTable(n_max)
    table.certify_lower(1, 1, "trivial")
    table.certify_lower(2, 1, "trivial")
    table.certify_upper(1, 1, "trivial", "K1")
    table.certify_upper(2, 1, "trivial", "P2")
    for n, (name, build, alpha) in sorted(WITNESSES.items()):
        if n > n_max:
            continue
        if not verify_witness(n, build(), alpha, table, name):
            raise ProofError(f"witness {name} does not certify f({n}) <= {alpha}")
    for n, t in ((3, 2), (5, 3), (8, 4), (10, 5), (13, 6), (17, 7)):
        if n > n_max:
            continue
        log = replay_deg_condition(n, t, table)
        if not log.verdict:
            raise ProofError(f"replay of f({n}) >= {t} failed", log)
        table.certify_lower(n, t, "replay", log)
    if n_max >= 12:
        log = replay_monotone(12, 10, 5, table)
        if not log.verdict:
            raise ProofError("f(12) >= 5 failed", log)
        table.certify_lower(12, 5, "replay", log)
    if n_max >= 16:
        log = replay_lower_extended(16, 7, table)
        if not log.verdict:
            raise ProofError("replay of f(16) >= 7 failed", log)
        table.certify_lower(16, 7, "replay", log)
    return table
