from __future__ import annotations

import json

import mpmath
import pytest

from fivedist.dodeca import build_dodecahedron
from fivedist.dsets import Coloring, PointSet, coloring_of, cube_coloring, cube_points, polygon_coloring
from fivedist.exact import QNum
from fivedist.extend import (
    BorderVector,
    ExtensionContext,
    ExtensionGraph,
    NonRigidError,
    Undecided,
    border_edge_test,
    build_extension_graph,
    candidate_points,
    enumerate_border_vectors,
    no_loop_certificate,
    omega_star,
    pinned_loop,
    pins_from_values,
    realize_numeric,
    unique_base_solution,
    verify_dodeca_clique,
)
from fivedist.verify import c1_reflections, polygon_loop

CENTER = BorderVector([4] * 8)


@pytest.fixture(scope="module")
def cube_ctx():
    return ExtensionContext(cube_coloring())


@pytest.fixture(scope="module")
def certificate(cube_ctx):
    return verify_dodeca_clique(cube_coloring(), cube_ctx)


def test_border_vector_validation():
    with pytest.raises(ValueError):
        BorderVector([0, 1, 2])
    with pytest.raises(ValueError):
        BorderVector([6] * 8)
    assert str(BorderVector([1, 2, 3])) == "123"


def test_vertex_test_cube_examples(cube_ctx):
    assert not cube_ctx.vertex_test([1] * 8)
    assert cube_ctx.vertex_test(CENTER)
    with pytest.raises(ValueError):
        cube_ctx.vertex_test([1, 2, 3])


def test_too_many_base_colors():
    c = Coloring.from_pairs(4, [1, 2, 3, 4, 5, 6])
    with pytest.raises(ValueError):
        ExtensionContext(c)


def test_dodecahedron_certificate(certificate):
    assert certificate.ok
    assert len(certificate.vectors) == 12
    assert all(certificate.vertex_ok)
    assert len(certificate.edge_ok) == 66 and all(certificate.edge_ok.values())
    assert certificate.five_distance and certificate.realizable and certificate.matches_dodecahedron
    assert sum(certificate.distance_multiset.values()) == 190
    assert sorted(certificate.distance_multiset.values()) == [10, 30, 30, 60, 60]
    assert certificate.values[2] == QNum.parse("2") and certificate.values[3] == QNum.parse("3")
    assert json.loads(json.dumps(certificate.to_dict()))["ok"]


def test_edge_witness_is_smallest_color(certificate, cube_ctx):
    a, b = certificate.vectors[0], certificate.vectors[1]
    w = border_edge_test(cube_coloring(), a, b, cube_ctx)
    assert w is not None
    assert w <= certificate.edge_colors[(0, 1)]
    assert all(not cube_ctx.edge_test(a, b, i) for i in range(1, w))


def test_certificate_values_match_coordinates(certificate):
    model = build_dodecahedron()
    pts = [[float(c) for c in p] for p in model.vertices]
    d2 = sorted({round(sum((a - b) ** 2 for a, b in zip(p, q)), 9) for p in pts for q in pts if p != q})
    cube_edge = d2[1]
    expected = sorted(v / cube_edge for v in d2)
    got = sorted(float(v) for v in certificate.values.values())
    assert got == pytest.approx(expected)
    assert {v.a for v in certificate.vectors} and all(len(v) == 8 for v in certificate.vectors)


def test_extension_graph_from_certificate(certificate, cube_ctx):
    GC = build_extension_graph(cube_coloring(), certificate.vectors[:4] + [[1] * 8], cube_ctx, loops=False)
    assert len(GC.vertices) == 4
    assert len(GC.edges) == 6
    assert omega_star(GC) == 4
    data = json.loads(GC.to_json())
    assert data["vertices"] == [str(v) for v in certificate.vectors[:4]]
    assert GC.to_dot().count("--") == 6


def test_omega_star_refuses_undecided():
    GC = ExtensionGraph(cube_coloring(), [BorderVector([4] * 8)], undecided=["edge x"])
    with pytest.raises(Undecided):
        omega_star(GC)
    assert omega_star(ExtensionGraph(cube_coloring(), [])) == 0


def test_budget_becomes_undecided():
    ctx = ExtensionContext(cube_coloring(), budget=1)
    GC = build_extension_graph(cube_coloring(), [CENTER], ctx)
    assert GC.undecided
    with pytest.raises(Undecided):
        omega_star(GC)


def test_enumeration_yields_accepted_vectors(cube_ctx):
    vectors = list(enumerate_border_vectors(cube_coloring(), cube_ctx, limit=3))
    assert len(vectors) == 3
    assert all(cube_ctx.vertex_test(v) for v in vectors)


def test_prefix_pruning_keeps_accepted_vectors(certificate, cube_ctx):
    order = [7, 0, 1, 2, 3, 4, 5, 6]
    for v in [*certificate.vectors, CENTER]:
        assert cube_ctx.vertex_test(v)
        for k in range(4, 8):
            assert cube_ctx.partial_vertex_test({p: v.a[p] for p in order[:k]})


def test_prefix_pruning_rejects_impossible_prefix(cube_ctx):
    # no point is at edge distance from seven cube vertices
    order = [7, 0, 1, 2, 3, 4, 5, 6]
    assert not cube_ctx.partial_vertex_test({p: 1 for p in order[:7]})
    with pytest.raises(ValueError):
        cube_ctx.partial_vertex_test({0: 1, 1: 1, 2: 1, 3: 1})


def test_cube_base_solution():
    assert unique_base_solution(cube_coloring()) == {2: 2, 3: 3}


def test_cube_has_no_loop():
    assert no_loop_certificate(cube_coloring())


def test_octagon_and_nonagon_have_loops():
    assert polygon_loop(8) is not None
    assert polygon_loop(9, (0,)) is not None


def test_pins_are_minimal_polynomials():
    pins = pins_from_values({1: 1, 2: 2, 3: mpmath.mpf(3) + mpmath.sqrt(2)})
    assert pins[2] == [1, -2] or pins[2] == [-1, 2]
    assert pins[3] in ([1, -6, 7], [-1, 6, -7])


def test_pinned_loop_none_for_cube():
    assert pinned_loop(cube_coloring(), CENTER, {2: [1, -2], 3: [1, -3]}) is None


def test_realize_numeric_matches_distances():
    X = realize_numeric(cube_coloring(), {1: 1, 2: 2, 3: 3})
    assert coloring_of(X) == cube_coloring()
    with pytest.raises(ValueError):
        realize_numeric(Coloring([[0 if i == j else 1 for j in range(5)] for i in range(5)]), {1: 1})


def test_planar_sets_rejected():
    square = PointSet([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])
    with pytest.raises(NonRigidError):
        candidate_points(square)


def _center_found(cands) -> bool:
    return any(all(abs(c - mpmath.mpf(1) / 2) < 1e-20 for c in q) for q in cands)


def _shape(v) -> tuple[int, ...]:
    """Border vector with new labels renamed in order of first appearance."""
    ren: dict[int, int] = {}
    return tuple(x if x <= 3 else ren.setdefault(x, 4 + len(ren)) for x in v)


@pytest.mark.slow
def test_cube_vertex_test_agrees_with_geometry(certificate, cube_ctx):
    X = cube_points()
    cands = candidate_points(X)
    assert _center_found(cands)
    geometric = set()
    with mpmath.workdps(40):
        for q in cands:
            d2 = [sum((c.to_mpf() - x) ** 2 for c, x in zip(p, q)) for p in X.points]
            new: dict[str, int] = {}
            labels = []
            for v in d2:
                k = next((k for k in (1, 2, 3) if abs(v - k) < 1e-20), None)
                if k is None:
                    k = new.setdefault(mpmath.nstr(v, 20), 4 + len(new))
                labels.append(k)
            geometric.add(_shape(labels))
    # curve families are reported by distance index (0-based)
    geometric |= {_shape([i + 1 for i in fam]) for fam in cands.families}
    algebraic = {_shape(v.a) for v in enumerate_border_vectors(cube_coloring(), cube_ctx)}
    assert algebraic == geometric
    assert {_shape(v.a) for v in certificate.vectors} <= algebraic


@pytest.mark.slow
def test_reflected_c1_realizations_have_three_candidates():
    Xs = c1_reflections()
    assert len(Xs) == 2
    for X in Xs:
        assert len(coloring_of(X).class_sizes()) == 4
        assert len(candidate_points(X)) == 3
