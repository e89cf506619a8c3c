"""Blankets, the target-set ancestral graph, its assumption check, and
validity — golden examples plus randomized sweeps."""

import numpy as np
import pytest

from cml.graphs import ARROW, TAIL, Dag, MixedGraph
from cml.mag import (
    check_assumption_inp,
    ground_truth_mag,
    markov_blanket,
    neighborhood_union,
    validate_mag,
)

from conftest import n, nset, random_dag
from oracles import brute_ancestors, brute_inducing_path_exists, brute_is_ancestral


def expected_demo13_mag() -> MixedGraph:
    g = MixedGraph(13, names=tuple(f"X{i}" for i in range(1, 14)))
    for i, j in [(1, 3), (2, 3), (3, 4), (3, 5), (4, 9), (2, 9), (9, 8), (8, 7), (8, 10)]:
        g.add_directed_edge(n(i), n(j))
    return g


def test_markov_blanket_demo(demo13):
    assert markov_blanket(demo13, n(3)) == nset(1, 2, 4, 5)
    assert markov_blanket(demo13, n(1)) == nset(2, 3, 13)
    assert markov_blanket(demo13, n(8)) == nset(7, 9, 10)


def test_markov_blanket_isolated():
    g = Dag.from_edges(3, [(0, 1)])
    assert markov_blanket(g, 2) == set()


def test_neighborhood_union_demo(demo13, demo13_targets):
    assert neighborhood_union(demo13, demo13_targets) == nset(1, 2, 3, 4, 5, 7, 8, 9, 10)


def test_ground_truth_mag_demo(demo13, demo13_targets):
    assert ground_truth_mag(demo13, demo13_targets) == expected_demo13_mag()


def test_ground_truth_mag_full_coverage_is_graph_itself(demo13):
    # targets whose neighborhoods cover all nodes: nothing marginalized
    targets = (n(3), n(8), n(6), n(12), n(13), n(11))
    if neighborhood_union(demo13, targets) == set(range(13)):
        mag = ground_truth_mag(demo13, targets)
        assert mag.skeleton_edges() == demo13.skeleton_edges()
        assert list(mag.edges()) == list(demo13.edges())


def test_check_assumption_demo(demo13, demo13_targets):
    assert check_assumption_inp(demo13, demo13_targets)


def test_check_assumption_single_target_whole_graph(demo13):
    assert check_assumption_inp(demo13, (n(3),))


def test_check_assumption_adversarial_violation():
    # Targets 6 and 7. NB(6) = {0,1,6}, NB(7) = {2,7}, so the complement is
    # {3,4,5}. The path <0,3,2,4,1> between the NB(6) members 0 and 1 has
    # exempt intermediates 3 and 4 and the collider 2 (3->2<-4) which is an
    # ancestor of 0 via 2->0 -- an inducing path whose intermediate node 2
    # lies in the other target's neighborhood.
    g = Dag.from_edges(
        8,
        [(3, 0), (3, 2), (4, 2), (4, 1), (2, 0), (2, 7), (0, 6), (1, 6)],
    )
    assert brute_inducing_path_exists(g, 0, 1, {3, 4, 5})
    assert not check_assumption_inp(g, (6, 7))
    # with target 6 alone, node 2 becomes exempt and nothing is violated
    assert check_assumption_inp(g, (6,))


def test_validate_mag_demo(demo13, demo13_targets):
    mag = ground_truth_mag(demo13, demo13_targets)
    assert validate_mag(mag)


def test_validate_mag_rejects_directed_cycle():
    g = MixedGraph(3)
    g.add_directed_edge(0, 1)
    g.add_directed_edge(1, 2)
    g.add_directed_edge(2, 0)
    assert not validate_mag(g)


def test_validate_mag_marginal_mag_with_sibling_edge(demo13, demo13_targets):
    # the marginal graph over the union adds a bidirected edge X1 <-> X2,
    # and stays a valid maximal ancestral graph
    mag = ground_truth_mag(demo13, demo13_targets)
    mag.set_edge(n(1), n(2), ARROW, ARROW)
    assert validate_mag(mag)


def test_validate_mag_rejects_nonmaximal_ancestral_graph():
    # 0 <-> 1 <-> 2 <-> 3 with 1 -> 4 -> 3 and 2 -> 5 -> 0: ancestral (no
    # cycles of either kind), but <0,1,2,3> is an inducing path between the
    # non-adjacent pair (0, 3): both intermediates are colliders and
    # endpoint ancestors. Maximality fails.
    g = MixedGraph(6)
    g.set_edge(0, 1, ARROW, ARROW)
    g.set_edge(1, 2, ARROW, ARROW)
    g.set_edge(2, 3, ARROW, ARROW)
    g.add_directed_edge(1, 4)
    g.add_directed_edge(4, 3)
    g.add_directed_edge(2, 5)
    g.add_directed_edge(5, 0)
    assert brute_is_ancestral(g)
    assert brute_inducing_path_exists(g, 0, 3, set())
    assert not validate_mag(g)


@pytest.mark.parametrize("seed", range(40))
def test_lemma_ground_truth_is_valid_mag(seed):
    rng = np.random.default_rng(5000 + seed)
    p = int(rng.integers(6, 13))
    g = random_dag(p, 2.0, rng)
    size = int(rng.integers(2, 4))
    targets = tuple(sorted(rng.choice(p, size=size, replace=False).tolist()))
    if not check_assumption_inp(g, targets):
        pytest.skip("assumption violated for this draw")
    mag = ground_truth_mag(g, targets)
    assert validate_mag(mag)
    assert brute_is_ancestral(mag)


@pytest.mark.parametrize("seed", range(20))
def test_mag_edges_match_adjacency_or_inducing_path(seed):
    rng = np.random.default_rng(6000 + seed)
    p = int(rng.integers(6, 12))
    g = random_dag(p, 2.0, rng)
    targets = tuple(sorted(rng.choice(p, size=2, replace=False).tolist()))
    mag = ground_truth_mag(g, targets)
    nodes = neighborhood_union(g, targets)
    l = set(range(p)) - nodes
    for i, j in mag.skeleton_edges():
        assert g.has_edge(i, j) or brute_inducing_path_exists(g, i, j, l)
    for i, j, mi, mj in mag.edges():
        if (mi, mj) == (TAIL, ARROW):
            assert i in brute_ancestors(g, j)
        elif (mi, mj) == (ARROW, TAIL):
            assert j in brute_ancestors(g, i)
        elif (mi, mj) == (ARROW, ARROW):
            assert i not in brute_ancestors(g, j)
            assert j not in brute_ancestors(g, i)
