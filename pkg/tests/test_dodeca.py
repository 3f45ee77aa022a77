from __future__ import annotations

import itertools
import math

import networkx as nx
import numpy as np
import pytest

from fivedist.dodeca import (
    CLASS_NAMES,
    automorphism_group,
    burnside_116,
    eigenmatrices,
    figure_labeling,
    intersection_numbers,
    phi_conjugate_subset,
    single_orbit,
    spherical_gram,
    subset_census,
)
from fivedist.exact import QNum, is_psd, matrix_rank, phi_matrix
from fivedist.graphs import are_isomorphic, shortest_path_distances

TAU = (1 + math.sqrt(5)) / 2
DISPLAYED_Q = [
    ["1", "3", "3", "4", "4", "5"],
    ["1", "1*sqrt5", "-1*sqrt5", "-8/3", "0", "5/3"],
    ["1", "1", "1", "2/3", "-2", "-5/3"],
    ["1", "-1", "-1", "2/3", "2", "-5/3"],
    ["1", "-1*sqrt5", "1*sqrt5", "-8/3", "0", "5/3"],
    ["1", "-3", "-3", "4", "-4", "5"],
]


def coords(model) -> np.ndarray:
    return np.array([[float(c) for c in p] for p in model.vertices])


def float_dist2(model) -> np.ndarray:
    X = coords(model)
    return ((X[:, None, :] - X[None, :, :]) ** 2).sum(-1)


def class_matrices(model):
    return [np.array([[1.0 if model.cls[x][y] == i else 0.0 for y in range(20)] for x in range(20)]) for i in range(6)]


def test_squared_distance_classes_exact(dodeca):
    expected = ["1", "3/2+1/2*sqrt5", "3+1*sqrt5", "7/2+3/2*sqrt5", "9/2+3/2*sqrt5"]
    assert list(dodeca.classes) == [QNum.parse(v) for v in expected]
    D = float_dist2(dodeca)
    for x, y in itertools.combinations(range(20), 2):
        assert D[x, y] == pytest.approx(float(dodeca.dist2[x, y]))
    values = sorted({round(D[x, y], 9) for x, y in itertools.combinations(range(20), 2)})
    assert values == pytest.approx([1, TAU**2, 2 * TAU**2, (TAU + 1) ** 2, 3 * TAU**2])


def test_distance_class_equals_graph_distance(dodeca):
    ref = nx.dodecahedral_graph()
    sk = nx.Graph(dodeca.skeleton.edges())
    assert nx.is_isomorphic(sk, ref)
    dist = shortest_path_distances(dodeca.skeleton)
    pairs = list(itertools.combinations(range(20), 2))
    assert len(pairs) == 190
    assert all(dodeca.cls[x][y] == dist[x][y] for x, y in pairs)
    assert max(max(row) for row in dist) == 5


def test_antipodes_are_negations(dodeca):
    X = coords(dodeca)
    for v, a in enumerate(dodeca.antipode):
        assert np.allclose(X[a], -X[v])
        assert dodeca.cls[v][a] == 5


def test_inscribed_cube_exists(dodeca):
    census = subset_census(8)
    cubes = census["small"][3]
    D = float_dist2(dodeca)
    for cube in cubes:
        sq = sorted({round(D[x, y] / TAU**2, 9) for x, y in itertools.combinations(cube, 2)})
        assert sq == pytest.approx([1, 2, 3])
        assert dodeca.class_set(cube) == {2, 3, 5}


def test_second_eigenmatrix_matches_display():
    P, Q, _ = eigenmatrices()
    for i in range(6):
        for j in range(6):
            assert Q[i, j] == QNum.parse(DISPLAYED_Q[i][j])
    assert Q[1, 1] == QNum.parse("1*sqrt5")
    for i in range(6):
        for j in range(6):
            s = sum((Q[i, k] * P[k, j] for k in range(6)), QNum.parse("0"))
            assert s == QNum.parse("20" if i == j else "0")


def test_q_columns_give_numeric_idempotents(dodeca):
    _, Q, _ = eigenmatrices()
    A = class_matrices(dodeca)
    total = np.zeros((20, 20))
    for j in range(6):
        E = sum(float(Q[i, j]) * A[i] for i in range(6)) / 20
        assert np.allclose(E @ E, E)
        assert np.trace(E) == pytest.approx(float(Q[0, j]))
        total += E
    assert np.allclose(total, np.eye(20))


def test_intersection_numbers_are_well_defined(dodeca):
    p = intersection_numbers(dodeca)
    assert [p[i, i, 0] for i in range(6)] == [1, 3, 6, 6, 3, 1]


def test_spherical_representations():
    E2, E3 = spherical_gram(2), spherical_gram(3)
    assert is_psd(E2) and is_psd(E3)
    assert matrix_rank(E2) == matrix_rank(E3) == 3
    assert phi_matrix(E2) == E3
    with pytest.raises(ValueError):
        spherical_gram(4)


def test_spherical_gram_is_scaled_gram(dodeca):
    E2 = np.array([[float(spherical_gram(2)[x, y]) for y in range(20)] for x in range(20)])
    X = coords(dodeca)
    G = X @ X.T
    scale = G[0, 0] / E2[0, 0]
    assert np.allclose(E2 * scale, G)


def test_distance_graphs_one_and_four_isomorphic(dodeca):
    assert are_isomorphic(dodeca.class_graph(1), dodeca.class_graph(4))


def test_automorphism_group(dodeca):
    group = automorphism_group()
    assert group.order == 120
    sizes = {name: len(group.classes[name]) for name in CLASS_NAMES}
    assert sizes == {
        "identity": 1,
        "face-rotation": 24,
        "edge-rotation": 15,
        "vertex-rotation": 20,
        "central-inversion": 1,
        "rotary-reflection": 24,
        "plane-reflection": 15,
        "rotary-reflection-6": 20,
    }
    D = dodeca.dist2
    for g in group.elements:
        assert all(D[g[x], g[y]] == D[x, y] for x, y in itertools.combinations(range(20), 2))
    ten_two_cycles = [g for g in group.elements if all(g[g[v]] == v != g[v] for v in range(20))]
    assert len(ten_two_cycles) == 16  # 15 edge rotations plus the central inversion


def test_burnside_counts_and_orbits():
    b = burnside_116()
    fixed = b["fixed_per_element"]
    assert b["selections"] == 11520
    assert fixed["identity"] == 11520
    assert fixed["edge-rotation"] == 16
    assert fixed["plane-reflection"] == 144
    assert fixed["central-inversion"] == 0
    assert b["burnside"] == b["orbits"] == 116


def test_orbits_by_minimum_image():
    from fivedist.dodeca import _mask_image, antipode_free_selections

    group = automorphism_group()
    sels = antipode_free_selections()
    reps = {min(_mask_image(g, s) for g in group.elements) for s in sels}
    assert len(reps) == 116


@pytest.mark.parametrize("k", [3, 4])
def test_small_census_matches_float_scan(dodeca, k):
    D = float_dist2(dodeca)
    counts: dict[int, int] = {}
    for combo in itertools.combinations(range(20), k):
        vals = {round(D[x, y], 6) for x, y in itertools.combinations(combo, 2)}
        counts[len(vals)] = counts.get(len(vals), 0) + 1
    assert subset_census(k)["counts"] == counts


def test_eight_point_census():
    c = subset_census(8)
    assert c["counts"][3] == 5
    assert c["counts"][4] == 11520
    assert min(c["counts"]) == 3
    assert c["four_iff_antipode_free"]
    assert single_orbit(c["small"][3])


def test_phi_conjugate_of_face_and_cube(dodeca):
    face = next(
        list(cyc)
        for cyc in itertools.combinations(range(20), 5)
        if dodeca.class_set(cyc) == {1, 2}
    )
    pc = phi_conjugate_subset(face)
    assert len(set(pc.image)) == 5
    cube = subset_census(8)["small"][3][0]
    pc = phi_conjugate_subset(cube)
    assert dodeca.class_set(pc.image) == {2, 3, 5}
    with pytest.raises(ValueError):
        phi_conjugate_subset([0, 0])


def test_figure_labels_recovered(dodeca):
    fig = figure_labeling()
    assert fig["group_order"] == 120
    assert fig["edges"] == 30
    assert fig["all_automorphisms"]
    assert len(set(fig["label_to_vertex"].values())) == 20
    assert len(dodeca.class_set(fig["W"])) == 4
