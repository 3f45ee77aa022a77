"""Claim registry and report assembly for ``fivedist verify-all``."""
from __future__ import annotations

import hashlib
import json
import random
import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from .exact import ExactMatrix, QNum, ZERO, ONE, is_psd, matrix_rank, phi, phi_matrix

__all__ = ["Claim", "ClaimResult", "CLAIMS", "GROUPS", "run_claims", "report_exit_code", "property_checks"]

VERDICTS = ("pass", "fail", "undecided", "skipped")


class Undecided(Exception):
    """A check could not reach a verdict within its budget."""


@dataclass
class ClaimResult:
    claim: str
    group: str
    location: str
    expected: object
    computed: object
    verdict: str
    runtime: float | None = None
    diagnostics: str | None = None

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "claim": self.claim,
            "group": self.group,
            "location": self.location,
            "expected": self.expected,
            "computed": self.computed,
            "verdict": self.verdict,
        }
        if timings:
            d["runtime"] = None if self.runtime is None else round(self.runtime, 3)
        if self.diagnostics:
            d["diagnostics"] = self.diagnostics
        return d


@dataclass
class Claim:
    id: str
    group: str
    location: str
    check: Callable[["Context"], tuple[object, object]]

    def run(self, ctx: "Context") -> ClaimResult:
        t = time.perf_counter()
        try:
            expected, computed = self.check(ctx)
            verdict = "pass" if _jsonable(expected) == _jsonable(computed) else "fail"
            diag = None
        except Undecided as exc:
            expected, computed, verdict, diag = None, None, "undecided", str(exc)
        except Exception as exc:  # a crashing check is a failing check
            expected, computed, verdict = None, None, "fail"
            diag = "".join(traceback.format_exception_only(type(exc), exc)).strip()
        return ClaimResult(self.id, self.group, self.location, _jsonable(expected), _jsonable(computed), verdict, time.perf_counter() - t, diag)


@dataclass
class Context:
    seed: int = 0
    cache: object = None
    emit_proof: Path | None = None
    memo: dict = field(default_factory=dict)

    def get(self, key: str, build: Callable[[], object]):
        if key not in self.memo:
            self.memo[key] = build()
        return self.memo[key]


def _jsonable(x):
    if isinstance(x, (QNum, Fraction)):
        return str(x)
    if isinstance(x, ExactMatrix):
        return [[str(v) for v in row] for row in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# dodecahedron


def _model(ctx):
    from .dodeca import build_dodecahedron

    return ctx.get("model", build_dodecahedron)


def _distance_classes(ctx):
    h = Fraction(1, 2)
    expected = [ONE, QNum(Fraction(3, 2), h), QNum(3, 1), QNum(Fraction(7, 2), Fraction(3, 2)), QNum(Fraction(9, 2), Fraction(3, 2))]
    return sorted(expected), sorted(_model(ctx).classes)


def _graph_metric(ctx):
    from .graphs import shortest_path_distances

    m = _model(ctx)
    dist = shortest_path_distances(m.skeleton)
    bad = 0
    for x in range(20):
        for y in range(x + 1, 20):
            i = dist[x][y]
            if m.dist2[x, y] != m.classes[i - 1] or m.cls[x][y] != i:
                bad += 1
    return {"pairs": 190, "mismatches": 0}, {"pairs": 190, "mismatches": bad}


EXPECTED_Q = [
    ["1", "3", "3", "4", "4", "5"],
    ["1", "1*sqrt5", "-1*sqrt5", "-8/3", "0", "5/3"],
    ["1", "1", "1", "2/3", "-2", "-5/3"],
    ["1", "-1", "-1", "2/3", "2", "-5/3"],
    ["1", "-1*sqrt5", "1*sqrt5", "-8/3", "0", "5/3"],
    ["1", "-3", "-3", "4", "-4", "5"],
]


def _second_eigenmatrix(ctx):
    from .dodeca import eigenmatrices

    _, Q, _ = eigenmatrices()
    expected = ExactMatrix([[QNum.parse(v) for v in row] for row in EXPECTED_Q])
    return _jsonable(expected), _jsonable(Q)


def _qp(ctx):
    from .dodeca import eigenmatrices

    P, Q, _ = eigenmatrices()
    return _jsonable(ExactMatrix.identity(6).scale(20)), _jsonable(Q @ P)


def _phi_e2(ctx):
    from .dodeca import spherical_gram

    return _jsonable(spherical_gram(3)), _jsonable(phi_matrix(spherical_gram(2)))


def _e2_psd(ctx):
    from .dodeca import spherical_gram

    E2 = spherical_gram(2)
    return {"psd": True, "rank": 3}, {"psd": is_psd(E2), "rank": matrix_rank(E2)}


def _alpha(key, value):
    def check(ctx):
        from .dodeca import alpha_table

        return value, ctx.get("alpha", alpha_table)[key]

    return check


def _census(ctx):
    from .dodeca import subset_census

    return ctx.get("census", lambda: subset_census(8))


def _census3(ctx):
    from .dodeca import single_orbit

    c = _census(ctx)
    cube = c["small"][3]
    return {"count": 5, "single_orbit": True}, {"count": c["counts"].get(3, 0), "single_orbit": single_orbit(cube)}


def _census4(ctx):
    c = _census(ctx)
    return {"count": 11520, "antipode_free": True}, {"count": c["counts"].get(4, 0), "antipode_free": c["four_iff_antipode_free"]}


def _burnside(ctx):
    from .dodeca import burnside_116

    return ctx.get("burnside", burnside_116)


def _burnside_fixed(ctx):
    from .dodeca import CLASS_NAMES

    b = _burnside(ctx)
    expected = dict(zip(CLASS_NAMES, (11520, 0, 16, 0, 0, 0, 144, 0)))
    return expected, b["fixed_per_element"]


def _burnside_orbits(ctx):
    b = _burnside(ctx)
    return {"burnside": 116, "orbits": 116}, {"burnside": b["burnside"], "orbits": b["orbits"]}


def _group_order(ctx):
    from .dodeca import automorphism_group

    G = automorphism_group()
    return {"order": 120, "sizes": [1, 24, 15, 20, 1, 24, 15, 20]}, {"order": G.order, "sizes": [len(v) for v in G.classes.values()]}


def _figure_w(ctx):
    from .dodeca import figure_labeling
    from .dsets import C1_MATRIX, Coloring, PointSet, coloring_of

    fl = figure_labeling()
    m = _model(ctx)
    W = coloring_of(PointSet([m.vertices[v] for v in fl["W"]]))
    return {"all_automorphisms": True, "coloring": [list(r) for r in C1_MATRIX]}, {
        "all_automorphisms": fl["all_automorphisms"],
        "coloring": [list(r) for r in W.matrix],
    }


# ---------------------------------------------------------------------------
# f-table and proof replay


def _table(ctx):
    from .bounds import bootstrap_f_table

    return ctx.get("table", bootstrap_f_table)


def _witnesses(ctx):
    from .bounds import WITNESSES, in_g_family
    from .graphs import independence_number

    computed = {}
    for n, (name, build, _) in sorted(WITNESSES.items()):
        G = build()
        computed[n] = independence_number(G) if G.n == n and in_g_family(G) else None
    return {3: 2, 5: 3, 8: 4, 10: 5, 12: 5, 13: 6, 16: 7, 17: 7}, computed


def _f_values(ctx):
    t = _table(ctx)
    ns = (3, 5, 8, 10, 12, 13, 16, 17)
    expected = dict(zip(ns, (2, 3, 4, 5, 5, 6, 7, 7)))
    return {n: [v, v] for n, v in expected.items()}, {n: [t.lower(n), t.upper(n)] for n in ns}


def _f_logs(ctx):
    from .bounds import verify_proof

    t = _table(ctx)
    out = {}
    for n, log in sorted(t.logs.items()):
        ok, _ = verify_proof(log.to_json(), t)
        out[n] = ok
        if ctx.emit_proof is not None:
            ctx.emit_proof.mkdir(parents=True, exist_ok=True)
            (ctx.emit_proof / f"f{n}.json").write_text(log.to_json())
    return {n: True for n in out}, out


def _oracle(ctx):
    from .bounds import exhaustive_f_oracle

    return {3: 2, 5: 3, 8: 4}, {n: exhaustive_f_oracle(n) for n in (3, 5, 8)}


def _replay(name):
    def check(ctx):
        from . import bounds

        t = _table(ctx)
        log = getattr(bounds, f"replay_{name}")(t)
        ok, problems = bounds.verify_proof(log.to_json(), t)
        if ctx.emit_proof is not None:
            ctx.emit_proof.mkdir(parents=True, exist_ok=True)
            (ctx.emit_proof / f"{name}.json").write_text(log.to_json())
        return {"verdict": True, "reverified": True, "t": 8}, {"verdict": log.verdict, "reverified": ok, "t": log.params.get("t", 8)}

    return check


# ---------------------------------------------------------------------------
# colorings


def _cube_system(ctx):
    from .dsets import cube_coloring, is_weakly_quasi_representable
    from .polysys import minimal_polynomial

    v = is_weakly_quasi_representable(cube_coloring(), cache=ctx.cache)
    if v.status == "budget":
        raise Undecided("Groebner budget exhausted")
    gb = v.basis
    vals = sorted(str(Fraction(-minimal_polynomial(gb, x)[-1])) for x in ("x1", "x2"))
    return {"status": "yes", "count": 1, "values": ["2", "3"]}, {"status": v.status, "count": v.count, "values": vals}


def _c1(ctx):
    from .dsets import C1_MATRIX, Coloring, is_weakly_quasi_representable
    from .polysys import is_zero_dimensional

    def build():
        return is_weakly_quasi_representable(Coloring(C1_MATRIX), cache=ctx.cache)

    v = ctx.get("c1", build)
    if v.status == "budget":
        raise Undecided("Groebner budget exhausted")
    return {"zero_dimensional": True, "solutions": 4}, {"zero_dimensional": is_zero_dimensional(v.basis), "solutions": v.count}


def _w_values(ctx, conj: bool):
    from .dodeca import figure_labeling
    from .dsets import C1_MATRIX, Coloring, weak_qr_system
    from .polysys import verify_solution

    m = _model(ctx)
    W = figure_labeling()["W"]
    C = Coloring(C1_MATRIX)
    vals: dict[int, QNum] = {}
    for i in range(8):
        for j in range(i + 1, 8):
            vals.setdefault(C(i, j), m.dist2[W[i], W[j]])
    unit = vals[1]
    norm = {k: v / unit for k, v in vals.items()}
    if conj:
        norm = {k: phi(v) for k, v in norm.items()}
    sys = weak_qr_system(C)
    assign = {f"x{k - 1}": v for k, v in norm.items() if k != 1}
    return True, verify_solution(sys, assign)


# ---------------------------------------------------------------------------
# extensions


def _dodeca_clique(ctx):
    from .extend import ExtensionContext, verify_dodeca_clique
    from .dsets import cube_coloring

    cert = verify_dodeca_clique(cube_coloring(), ExtensionContext(cube_coloring(), cache=ctx.cache))
    d = cert.to_dict()
    return {"vertex_tests": 12, "edge_tests": 66, "five_distance": True, "realizable": True, "matches_dodecahedron": True}, {
        k: d[k] for k in ("vertex_tests", "edge_tests", "five_distance", "realizable", "matches_dodecahedron")
    }


def polygon_loop(n: int, drop=(), ctx=None) -> int | None:
    """Witness color of the loop at the all-new border vector of a polygon subset."""
    import mpmath

    from .dsets import polygon_coloring
    from .extend import BorderVector, ExtensionContext, pinned_loop, pins_from_values

    C = polygon_coloring(n, list(drop))
    keep = [k for k in range(n) if k not in drop]
    with mpmath.workdps(40):
        chord = lambda k: 2 - 2 * mpmath.cos(2 * mpmath.pi * k / n)
        values = {C(i, j): chord(keep[i] - keep[j]) / chord(keep[1] - keep[0]) for i in range(8) for j in range(8) if i != j}
        pins = pins_from_values(values)
    ectx = ExtensionContext(C, cache=getattr(ctx, "cache", None))
    return pinned_loop(C, BorderVector([C.s + 1] * 8), pins, ectx)


def _loop(n, drop):
    def check(ctx):
        return True, polygon_loop(n, drop, ctx) is not None

    return check


def _cube_no_loop(ctx):
    from .dsets import cube_coloring
    from .extend import no_loop_certificate

    return True, no_loop_certificate(cube_coloring())


def c1_reflections(dps: int = 60):
    """Numeric realizations of C1 for the solutions that are not the
    dodecahedral subset W or its conjugate."""
    import mpmath

    from .dodeca import build_dodecahedron, figure_labeling
    from .dsets import C1_MATRIX, Coloring, weak_qr_system
    from .extend import realize_numeric
    from .polysys import buchberger, solve_numeric

    C = Coloring(C1_MATRIX)
    m = build_dodecahedron()
    W = figure_labeling()["W"]
    vals: dict[int, QNum] = {}
    for i in range(8):
        for j in range(i + 1, 8):
            vals.setdefault(C(i, j), m.dist2[W[i], W[j]])
    w = [vals[k] / vals[1] for k in (2, 3, 4)]
    dodecahedral = [w, [phi(v) for v in w]]
    gb = buchberger(weak_qr_system(C))
    out = []
    with mpmath.workdps(dps):
        for sol in solve_numeric(gb, dps=dps):
            got = [sol["x1"], sol["x2"], sol["x3"]]
            if any(all(abs(g - v.to_mpf()) < mpmath.mpf(10) ** (-dps // 2) for g, v in zip(got, ref)) for ref in dodecahedral):
                continue
            out.append(realize_numeric(C, {1: 1, 2: got[0], 3: got[1], 4: got[2]}, dps=dps))
    return out


def _x1_candidates(ctx):
    from .extend import candidate_points

    Xs = c1_reflections()
    return [3, 3], [len(candidate_points(X)) for X in Xs]


# ---------------------------------------------------------------------------
# property suites


def property_checks(seed: int, psd_trials: int = 1000, point_trials: int = 100, relabel_trials: int = 100) -> dict:
    """Randomized consistency checks; returns counts of passing trials."""
    from .dsets import Coloring, PointSet, canonical_coloring, coloring_of, gram_of, is_realizable_gram, principal_rank, weak_qr_system
    from .graphs import Graph, canonical_form
    from .polysys import verify_solution

    rng = random.Random(seed)
    out = {}

    ok = 0
    for _ in range(psd_trials):
        n, k = rng.randint(2, 6), rng.randint(1, 4)
        B = ExactMatrix([[QNum(rng.randint(-3, 3), rng.randint(-1, 1)) for _ in range(k)] for _ in range(n)])
        M = B @ B.transpose()
        ok += principal_rank(M) == matrix_rank(M)
    out["principal_rank_psd"] = ok

    ok = 0
    for _ in range(psd_trials):
        n = rng.randint(2, 6)
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = QNum(rng.randint(-2, 2))
        M = ExactMatrix(rows)
        ok += principal_rank(M) <= matrix_rank(M)
    out["principal_rank_symmetric"] = ok

    ok = 0
    for _ in range(point_trials):
        n = rng.randint(4, 7)
        pts = set()
        while len(pts) < n:
            pts.add(tuple(rng.randint(0, 2) for _ in range(3)))
        X = PointSet(sorted(pts))
        c = coloring_of(X)
        D = X.distance_matrix()
        unit = min(D[i, j] for i in range(n) for j in range(n) if i != j)
        values = {}
        for i in range(n):
            for j in range(i + 1, n):
                values[c(i, j)] = D[i, j] / unit
        assign = {f"x{k - 1}": v for k, v in values.items() if k != 1}
        if c.s <= 5:
            holds = verify_solution(weak_qr_system(c), assign)
        else:
            # with every value fixed the minors are constants; all must vanish
            holds = len(weak_qr_system(c, fixed=values).polys) == 0
        sound = holds and is_realizable_gram(gram_of(D), 3).ok
        ok += sound
    out["weak_representability_sound"] = ok

    ok = 0
    for _ in range(relabel_trials):
        n = rng.randint(3, 7)
        pts = set()
        while len(pts) < n:
            pts.add(tuple(rng.randint(0, 2) for _ in range(3)))
        c = coloring_of(PointSet(sorted(pts)))
        perm = list(range(n))
        rng.shuffle(perm)
        colors = list(range(1, c.s + 1))
        rng.shuffle(colors)
        d = c.relabel(perm).recolor({k + 1: colors[k] for k in range(c.s)})
        ok += canonical_coloring(c) == canonical_coloring(d)
    out["canonical_coloring_stable"] = ok

    ok = 0
    for _ in range(relabel_trials):
        n = rng.randint(1, 12)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        G = Graph(n, edges)
        perm = list(range(n))
        rng.shuffle(perm)
        ok += canonical_form(G) == canonical_form(G.relabel(perm))
    out["canonical_graph_stable"] = ok
    return out


def _properties(ctx):
    got = property_checks(ctx.seed)
    expected = {
        "principal_rank_psd": 1000,
        "principal_rank_symmetric": 1000,
        "weak_representability_sound": 100,
        "canonical_coloring_stable": 100,
        "canonical_graph_stable": 100,
    }
    return expected, got


# ---------------------------------------------------------------------------
# registry


CLAIMS: list[Claim] = [
    Claim("dodeca.distance-classes", "dodeca", "squared distances of the unit-edge dodecahedron", _distance_classes),
    Claim("dodeca.graph-metric", "dodeca", "distance classes match graph distance", _graph_metric),
    Claim("dodeca.second-eigenmatrix", "dodeca", "second eigenmatrix Q", _second_eigenmatrix),
    Claim("dodeca.qp-identity", "dodeca", "QP = 20 I", _qp),
    Claim("dodeca.phi-conjugation", "dodeca", "conjugation maps E2 to E3", _phi_e2),
    Claim("dodeca.e2-spherical", "dodeca", "E2 is a rank-3 PSD Gram matrix", _e2_psd),
    Claim("dodeca.alpha-2", "dodeca", "independence number of distance graph 2", _alpha("2", 6)),
    Claim("dodeca.alpha-3", "dodeca", "independence number of distance graph 3", _alpha("3", 5)),
    Claim("dodeca.alpha-1-5", "dodeca", "independence number of distance graph {1,5}", _alpha("1,5", 7)),
    Claim("dodeca.alpha-4-5", "dodeca", "independence number of distance graph {4,5}", _alpha("4,5", 7)),
    Claim("dodeca.alpha-1-4", "dodeca", "independence number of distance graph {1,4}", _alpha("1,4", 8)),
    Claim("dodeca.census-3", "dodeca", "8-subsets with three distances", _census3),
    Claim("dodeca.census-4", "dodeca", "8-subsets with four distances", _census4),
    Claim("dodeca.group", "dodeca", "full symmetry group and its classes", _group_order),
    Claim("dodeca.burnside-fixed", "dodeca", "fixed antipode-free selections per class", _burnside_fixed),
    Claim("dodeca.burnside-orbits", "dodeca", "orbits of antipode-free selections", _burnside_orbits),
    Claim("dodeca.figure-w", "dodeca", "figure labels and the subset W", _figure_w),
    Claim("bounds.witnesses", "bounds", "upper-bound witness graphs", _witnesses),
    Claim("bounds.f-values", "bounds", "f(n) for n in {3,5,8,10,12,13,16,17}", _f_values),
    Claim("bounds.f-logs", "bounds", "stored f-table proofs re-verify", _f_logs),
    Claim("bounds.exhaustive", "bounds", "exhaustive f(3), f(5), f(8)", _oracle),
    Claim("bounds.disconnected20", "bounds", "disconnected 20-vertex case", _replay("disconnected20")),
    Claim("bounds.diameter20", "bounds", "diameter graphs of 20 points", _replay("diameter20")),
    Claim("dsets.cube-system", "dsets", "cube coloring system solutions", _cube_system),
    Claim("dsets.c1-solutions", "dsets", "C1 system solution count", _c1),
    Claim("dsets.c1-w", "dsets", "W distances solve the C1 system", lambda ctx: _w_values(ctx, False)),
    Claim("dsets.c1-w-conjugate", "dsets", "conjugated W distances solve the C1 system", lambda ctx: _w_values(ctx, True)),
    Claim("extend.dodeca-clique", "extend", "12-clique over the cube", _dodeca_clique),
    Claim("extend.loop-octagon", "extend", "regular octagon has a loop", _loop(8, ())),
    Claim("extend.loop-nonagon", "extend", "nonagon minus a point has a loop", _loop(9, (0,))),
    Claim("extend.cube-no-loop", "extend", "cube has no loop", _cube_no_loop),
    Claim("extend.c1-reflected-candidates", "extend", "candidates over reflected C1 realizations", _x1_candidates),
    Claim("properties.random-suites", "properties", "randomized rank, soundness and canonical checks", _properties),
]

GROUPS = sorted({c.group for c in CLAIMS})


def run_claims(only: list[str] | None = None, seed: int = 0, cache=None, emit_proof: str | None = None, timings: bool = False) -> dict:
    selected = [c for c in CLAIMS if not only or c.group in only or c.id in only]
    if only and not selected:
        raise ValueError(f"no claims match {only}")
    ctx = Context(seed=seed, cache=cache, emit_proof=Path(emit_proof) if emit_proof else None)
    results = [c.run(ctx) for c in selected]
    config = {"only": sorted(only or []), "seed": seed}
    summary = {v: sum(r.verdict == v for r in results) for v in VERDICTS}
    return {
        "version": __version__,
        "config_hash": hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()[:16],
        "seed": seed,
        "summary": summary,
        "claims": [r.to_dict(timings) for r in results],
    }


def report_exit_code(report: dict) -> int:
    s = report["summary"]
    if s["fail"]:
        return 1
    if s["undecided"]:
        return 3
    return 0
