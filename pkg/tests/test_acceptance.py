"""Acceptance criteria, one test each.

Run ``pytest tests/test_acceptance.py`` (or this file directly); a
PASS/FAIL line per criterion is printed at the end of the session.
"""
from __future__ import annotations

import json
import time
from contextlib import contextmanager

import pytest

from fivedist.bounds import (
    WITNESSES,
    bootstrap_f_table,
    exhaustive_f_oracle,
    replay_diameter20,
    replay_disconnected20,
    verify_proof,
)
from fivedist.dodeca import (
    CLASS_NAMES,
    _mask_image,
    alpha_table,
    antipode_free_selections,
    automorphism_group,
    build_dodecahedron,
    burnside_116,
    eigenmatrices,
    figure_labeling,
    single_orbit,
    spherical_gram,
    subset_census,
)
from fivedist.dsets import C1_MATRIX, Coloring, cube_coloring, weak_qr_system
from fivedist.exact import ExactMatrix, QNum, phi, phi_matrix
from fivedist.extend import no_loop_certificate, unique_base_solution, verify_dodeca_clique
from fivedist.graphs import independence_number, shortest_path_distances
from fivedist.polysys import buchberger, count_distinct_solutions, is_zero_dimensional, verify_solution
from fivedist.verify import polygon_loop, property_checks

Q_DISPLAY = [
    ["1", "3", "3", "4", "4", "5"],
    ["1", "1*sqrt5", "-1*sqrt5", "-8/3", "0", "5/3"],
    ["1", "1", "1", "2/3", "-2", "-5/3"],
    ["1", "-1", "-1", "2/3", "2", "-5/3"],
    ["1", "-1*sqrt5", "1*sqrt5", "-8/3", "0", "5/3"],
    ["1", "-3", "-3", "4", "-4", "5"],
]
F_UPPER = {3: 2, 5: 3, 8: 4, 10: 5, 12: 5, 13: 6, 16: 7, 17: 7}


@contextmanager
def within(seconds: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, limit {seconds}s"


def test_ac01_distance_classes():
    """squared distance classes are exact, under 1 s"""
    with within(1):
        model = build_dodecahedron.__wrapped__()
    expected = ["1", "3/2+1/2*sqrt5", "3+1*sqrt5", "7/2+3/2*sqrt5", "9/2+3/2*sqrt5"]
    assert list(model.classes) == [QNum.parse(v) for v in expected]


def test_ac02_graph_metric():
    """all 190 pairs: distance class i iff graph distance i"""
    model = build_dodecahedron()
    dist = shortest_path_distances(model.skeleton)
    pairs = [(x, y) for x in range(20) for y in range(x + 1, 20)]
    assert len(pairs) == 190
    for x, y in pairs:
        assert model.dist2[x, y] == model.classes[int(dist[x][y]) - 1]


def test_ac03_second_eigenmatrix():
    """Q equals the displayed matrix and QP = 20 I"""
    P, Q, _ = eigenmatrices()
    assert Q == ExactMatrix([[QNum.parse(v) for v in row] for row in Q_DISPLAY])
    assert Q @ P == ExactMatrix.identity(6).scale(20)


def test_ac04_phi_conjugation():
    """phi(E2) = E3"""
    assert phi_matrix(spherical_gram(2)) == spherical_gram(3)


def test_ac05_alpha_table():
    """independence numbers of the class graphs"""
    assert alpha_table() == {"2": 6, "3": 5, "1,5": 7, "4,5": 7, "1,4": 8}


def test_ac06_census():
    """8-subsets: five cubes in one orbit, 11520 antipode-free 4-distance sets, under 60 s"""
    with within(60):
        census = subset_census(8)
    assert census["counts"][3] == 5
    assert census["counts"][4] == 11520
    assert census["four_iff_antipode_free"]
    cubes = census["small"][3]
    assert single_orbit(cubes)
    model = build_dodecahedron()
    assert all(model.class_set(c) == {2, 3, 5} for c in cubes)


def test_ac07_burnside():
    """Burnside fixed counts and 116 orbits, cross-checked, under 30 s"""
    with within(30):
        b = burnside_116()
    fixed = [b["fixed_per_element"][name] for name in CLASS_NAMES]
    assert fixed == [11520, 0, 16, 0, 0, 0, 144, 0]
    assert b["burnside"] == b["orbits"] == 116
    group = automorphism_group()
    reps = {min(_mask_image(g, s) for g in group.elements) for s in antipode_free_selections()}
    assert len(reps) == 116


def test_ac08_f_table():
    """witnesses, replayed lower bounds and the exhaustive oracle agree on f(n)"""
    table = bootstrap_f_table()
    for n, value in F_UPPER.items():
        _, build, alpha = WITNESSES[n]
        assert alpha == value and independence_number(build()) == value
        assert table.upper(n) == value
        assert table.lower(n) == value, f"lower bound for f({n})"
    for n, log in table.logs.items():
        assert verify_proof(log.to_json(), table)[0]
    for n in (3, 5, 8):
        assert exhaustive_f_oracle(n) == F_UPPER[n]


def test_ac09_twenty_point_replays():
    """disconnected and diameter-graph replays prove alpha >= 8 and re-verify from JSON"""
    table = bootstrap_f_table()
    for replay in (replay_disconnected20, replay_diameter20):
        log = replay(table)
        assert log.verdict
        ok, problems = verify_proof(json.loads(log.to_json()), table)
        assert ok, problems


def test_ac10_cube_system():
    """the cube system has the single solution (2, 3), under 60 s"""
    with within(60):
        sys = weak_qr_system(cube_coloring())
        gb = buchberger(sys)
        assert count_distinct_solutions(gb) == 1
        assert unique_base_solution(cube_coloring()) == {2: 2, 3: 3}
    assert verify_solution(sys, {"x1": 2, "x2": 3})


def test_ac11_c1_system():
    """C1 is zero-dimensional with 4 solutions; W and its conjugate solve it"""
    C = Coloring(C1_MATRIX)
    sys = weak_qr_system(C)
    gb = buchberger(sys)
    assert is_zero_dimensional(gb)
    assert count_distinct_solutions(gb) == 4
    model = build_dodecahedron()
    W = figure_labeling()["W"]
    vals: dict[int, QNum] = {}
    for i in range(8):
        for j in range(i + 1, 8):
            v = model.dist2[W[i], W[j]]
            assert vals.setdefault(C(i, j), v) == v
    w = {f"x{k - 1}": vals[k] / vals[1] for k in vals if k != 1}
    assert verify_solution(sys, w)
    assert verify_solution(sys, {k: phi(v) for k, v in w.items()})


def test_ac12_dodecahedron_clique():
    """a certified 12-clique over the cube rebuilds the dodecahedron"""
    cert = verify_dodeca_clique()
    assert cert.ok
    assert cert.five_distance and cert.matches_dodecahedron
    model = build_dodecahedron()
    # the certificate measures in cube-edge units; cube edges are the second class
    unit = model.classes[1]
    expected: dict[str, int] = {}
    for x in range(20):
        for y in range(x + 1, 20):
            key = str(model.dist2[x, y] / unit)
            expected[key] = expected.get(key, 0) + 1
    assert cert.distance_multiset == expected


def test_ac13_property_suites():
    """rank, soundness and canonical-form property suites, under 5 min"""
    with within(300):
        got = property_checks(seed=0)
    assert got == {
        "principal_rank_psd": 1000,
        "principal_rank_symmetric": 1000,
        "weak_representability_sound": 100,
        "canonical_coloring_stable": 100,
        "canonical_graph_stable": 100,
    }


def test_ac14_loops():
    """octagon and nonagon-minus-point have loops, the cube has none, under 5 min"""
    with within(300):
        assert polygon_loop(8) is not None
        assert polygon_loop(9, (0,)) is not None
        assert no_loop_certificate(cube_coloring())


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
