import numpy as np
import pytest

from cml.ci import OracleTester
from cml.graphs import Dag, GraphError
from cml.mag import markov_blanket
from cml.mb import (
    MbConfig,
    NeighborSets,
    build_neighbor_sets,
    estimate_parents_children,
    estimate_spouses,
)

from conftest import n, nset, random_dag

UNBOUNDED = MbConfig(alpha=0.01, lmax=None)


def test_pc_demo_target3(demo13):
    t = OracleTester(demo13)
    assert estimate_parents_children(n(3), t, 0.01, None) == nset(1, 2, 4, 5)


def test_pc_demo_target1(demo13):
    t = OracleTester(demo13)
    # the spouse X2 is excluded: X1 and X2 separate given X13
    assert estimate_parents_children(n(1), t, 0.01, None) == nset(3, 13)


def test_pc_isolated_node():
    g = Dag.from_edges(4, [(0, 1)])
    t = OracleTester(g)
    assert estimate_parents_children(3, t, 0.01, None) == set()


def test_pc_symmetry_removes_collider_trap():
    # t -> c <- s, c -> v, s -> v: the raw sweep keeps the grandchild v in
    # pc(t) because every separator of (t, v) needs s, which never enters;
    # the cross-check drops it since pc(v) = {c, s} has no place for t.
    g = Dag.from_edges(4, [(0, 1), (2, 1), (1, 3), (2, 3)])
    t = OracleTester(g)
    assert estimate_parents_children(0, t, 0.01, None) == {1}


def test_spouses_demo_target1(demo13):
    t = OracleTester(demo13)
    got = estimate_spouses(n(1), nset(3, 13), t, 0.01, None)
    assert got == nset(2)


def test_spouses_demo_target3_empty(demo13):
    t = OracleTester(demo13)
    assert estimate_spouses(n(3), nset(1, 2, 4, 5), t, 0.01, None) == set()


def test_spouses_childless_target():
    g = Dag.from_edges(4, [(1, 0), (2, 0), (2, 3)])
    t = OracleTester(g)
    pc = estimate_parents_children(0, t, 0.01, None)
    assert pc == {1, 2}
    assert estimate_spouses(0, pc, t, 0.01, None) == set()


def test_build_neighbor_sets_demo(demo13, demo13_targets):
    tester = OracleTester(demo13)
    nbs = build_neighbor_sets(demo13_targets, tester, UNBOUNDED)
    assert nbs.n1[n(3)] == frozenset(nset(1, 2, 4, 5))
    assert nbs.n1[n(8)] == frozenset(nset(7, 9, 10))
    union_n2 = frozenset()
    for t in demo13_targets:
        union_n2 |= nbs.n2[t]
    assert union_n2 == frozenset(nset(6, 11, 12, 13))
    assert nbs.union == frozenset(nset(1, 2, 3, 4, 5, 7, 8, 9, 10))


def test_build_neighbor_sets_member_full_same_demo(demo13, demo13_targets):
    tester = OracleTester(demo13)
    full = build_neighbor_sets(
        demo13_targets, tester, MbConfig(alpha=0.01, lmax=None, member_full=True)
    )
    assert full.n1[n(3)] == frozenset(nset(1, 2, 4, 5))
    union_n2 = frozenset()
    for t in demo13_targets:
        union_n2 |= full.n2[t]
    assert union_n2 == frozenset(nset(6, 11, 12, 13))


def test_build_neighbor_sets_rejects_empty(demo13):
    with pytest.raises(GraphError):
        build_neighbor_sets((), OracleTester(demo13), UNBOUNDED)


def test_n2_disjoint_from_nb(demo13, demo13_targets):
    nbs = build_neighbor_sets(demo13_targets, OracleTester(demo13), UNBOUNDED)
    for t in demo13_targets:
        assert not (nbs.n2[t] & nbs.nb(t))


def test_same_neighborhood_demo(demo13, demo13_targets):
    nbs = build_neighbor_sets(demo13_targets, OracleTester(demo13), UNBOUNDED)
    assert nbs.same_neighborhood(n(1), n(2))
    assert nbs.same_neighborhood(n(8), n(9))
    assert not nbs.same_neighborhood(n(4), n(9))


def test_neighbor_sets_json_round_trip(demo13, demo13_targets):
    nbs = build_neighbor_sets(demo13_targets, OracleTester(demo13), UNBOUNDED)
    doc = nbs.to_json_dict()
    back = NeighborSets.from_json_dict(doc)
    assert back.targets == nbs.targets
    assert back.n1 == nbs.n1
    assert back.n2 == nbs.n2


@pytest.mark.parametrize("seed", range(25))
def test_oracle_blanket_fixed_point_on_random_dags(seed):
    rng = np.random.default_rng(10_000 + seed)
    p = int(rng.integers(5, 12))
    g = random_dag(p, 2.0, rng)
    tester = OracleTester(g)
    targets = tuple(sorted(rng.choice(p, size=2, replace=False).tolist()))
    nbs = build_neighbor_sets(targets, tester, UNBOUNDED)
    for t in targets:
        assert nbs.n1[t] == frozenset(markov_blanket(g, t)), (
            f"seed={seed} target={t}\n{g.format_edges()}"
        )


def test_determinism_same_counts(demo13, demo13_targets):
    t1 = OracleTester(demo13)
    a = build_neighbor_sets(demo13_targets, t1, UNBOUNDED)
    t2 = OracleTester(demo13)
    b = build_neighbor_sets(demo13_targets, t2, UNBOUNDED)
    assert a.n1 == b.n1 and a.n2 == b.n2
    assert t1.count == t2.count
