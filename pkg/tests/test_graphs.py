from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fivedist.graphs import (
    UNREACHABLE,
    Graph,
    are_isomorphic,
    canonical_form,
    canonical_labeling,
    cayley_graph,
    clique_number,
    cycle_graph,
    from_graph6,
    has_cycle_of_length,
    has_short_odd_cycle,
    independence_number,
    max_clique,
    max_independent_set,
    path_graph,
    petersen_graph,
    shortest_path_distances,
    to_dot,
    to_graph6,
)


@st.composite
def graphs(draw, max_n: int = 11):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, keep in zip(pairs, mask) if keep])


def to_nx(G: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(G.n))
    h.add_edges_from(G.edges())
    return h


def brute_alpha(G: Graph) -> int:
    for k in range(G.n, 0, -1):
        if any(G.is_independent(S) for S in itertools.combinations(range(G.n), k)):
            return k
    return 0


def brute_cycle(G: Graph, k: int) -> bool:
    for verts in itertools.combinations(range(G.n), k):
        first = verts[0]
        for rest in itertools.permutations(verts[1:]):
            cyc = (first, *rest)
            if all(G.has_edge(cyc[i], cyc[(i + 1) % k]) for i in range(k)):
                return True
    return False


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_clique_number_matches_networkx(G):
    expected = max(len(c) for c in nx.find_cliques(to_nx(G)))
    assert clique_number(G) == expected
    clique = max_clique(G)
    assert G.is_clique(clique) and len(clique) == expected


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_independence_number_matches_brute_force(G):
    expected = brute_alpha(G)
    assert independence_number(G) == expected
    S = max_independent_set(G)
    assert G.is_independent(S) and len(S) == expected


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7), st.sampled_from([3, 4, 5]))
def test_cycle_detection_matches_brute_force(G, k):
    assert has_cycle_of_length(G, k) == brute_cycle(G, k)
    if k in (3, 5):
        assert has_short_odd_cycle(G, k) == brute_cycle(G, k)


@settings(max_examples=40, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_canonical_form_invariant_under_relabeling(G, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    H = G.relabel(perm)
    assert canonical_form(G) == canonical_form(H)
    assert are_isomorphic(G, H)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=8), graphs(max_n=8))
def test_isomorphism_matches_networkx(G, H):
    assert are_isomorphic(G, H) == nx.is_isomorphic(to_nx(G), to_nx(H))


def test_canonical_labeling_gives_canonical_graph():
    G = petersen_graph()
    rng = random.Random(5)
    images = set()
    for _ in range(10):
        perm = list(range(G.n))
        rng.shuffle(perm)
        H = G.relabel(perm)
        order = canonical_labeling(H)
        inverse = [0] * H.n
        for pos, v in enumerate(order):
            inverse[v] = pos
        images.add(tuple(sorted(tuple(sorted((inverse[u], inverse[v]))) for u, v in H.edges())))
    assert len(images) == 1


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_graph6_roundtrip(G):
    assert from_graph6(to_graph6(G)) == G
    assert to_graph6(G) == nx.to_graph6_bytes(to_nx(G), header=False).strip()


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_distances_match_networkx(G):
    D = shortest_path_distances(G)
    ref = dict(nx.all_pairs_shortest_path_length(to_nx(G)))
    for u in range(G.n):
        for v in range(G.n):
            assert D[u][v] == ref[u].get(v, UNREACHABLE)


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_components_and_connectivity(G):
    h = to_nx(G)
    assert G.is_connected() == nx.is_connected(h)
    assert sorted(map(sorted, G.components())) == sorted(map(sorted, nx.connected_components(h)))


def test_known_families():
    P = petersen_graph()
    assert independence_number(P) == 4
    assert clique_number(P) == 2
    assert not has_cycle_of_length(P, 3) and not has_cycle_of_length(P, 4)
    assert has_cycle_of_length(P, 5)
    assert nx.is_isomorphic(to_nx(P), nx.petersen_graph())
    assert independence_number(cycle_graph(7)) == 3
    assert independence_number(path_graph(7)) == 4
    C = cayley_graph(17, [1, 2, 4, 8, 9, 13, 15, 16])
    assert all(C.degree(v) == 8 for v in range(17))
    assert nx.is_isomorphic(to_nx(C), nx.paley_graph(17).to_undirected())


def test_cayley_requires_symmetric_connection():
    with pytest.raises(ValueError):
        cayley_graph(7, [1])
    with pytest.raises(ValueError):
        cayley_graph(7, [0, 1, 6])


def test_complement_induced_and_loops():
    G = Graph(4, [(0, 1), (2, 2)])
    assert G.loops == {2}
    assert G.complement().num_edges() == 5
    assert G.induced([0, 1]).num_edges() == 1
    assert "2 -- 2;" in to_dot(G)
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


def _alpha_by_subset_scan(G: Graph) -> int:
    best = 0
    for mask in range(1 << G.n):
        if any(mask >> v & 1 and G.adj[v] & mask for v in range(G.n)):
            continue
        best = max(best, bin(mask).count("1"))
    return best


def test_alpha_matches_subset_scan_on_ten_thousand_small_graphs():
    rng = random.Random(2024)
    for _ in range(10_000):
        n = rng.randint(1, 8)
        p = rng.random()
        G = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])
        assert independence_number(G) == _alpha_by_subset_scan(G)


def test_complement_duality():
    rng = random.Random(99)
    for _ in range(300):
        n = rng.randint(1, 14)
        G = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.4])
        assert clique_number(G) == independence_number(G.complement())


def test_named_examples():
    assert independence_number(cycle_graph(8)) == 4
    assert independence_number(cycle_graph(13)) == 6
    c17 = cayley_graph(17, [1, -1, 6, -6])
    assert independence_number(c17) == 7
    assert not has_short_odd_cycle(c17, 3) and not has_short_odd_cycle(c17, 5)
    assert all(c17.degree(v) == 4 for v in range(17))
    assert independence_number(cayley_graph(12, [1, -1, 6])) == 5
    assert cayley_graph(5, [1, -1]) == cycle_graph(5)
    assert has_short_odd_cycle(cycle_graph(5), 5) and not has_short_odd_cycle(cycle_graph(5), 3)
    P = petersen_graph()
    assert not has_short_odd_cycle(P, 3) and has_short_odd_cycle(P, 5)
    assert shortest_path_distances(path_graph(3))[0][2] == 2
    assert shortest_path_distances(Graph(2))[0][1] == UNREACHABLE


def test_canonical_form_separates_c6_from_two_triangles():
    two_triangles = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert canonical_form(cycle_graph(6)) != canonical_form(two_triangles)
    assert not are_isomorphic(cycle_graph(6), two_triangles)


def test_canonical_form_stable_over_hundred_relabelings():
    rng = random.Random(17)
    for G in (cycle_graph(6), petersen_graph(), cayley_graph(17, [1, -1, 6, -6])):
        ref = canonical_form(G)
        for _ in range(100):
            perm = list(range(G.n))
            rng.shuffle(perm)
            assert canonical_form(G.relabel(perm)) == ref
