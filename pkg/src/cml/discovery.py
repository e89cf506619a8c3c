"""Constraint-based discovery: the coordinated multi-neighborhood algorithm
(run_cml), the per-neighborhood baseline (run_snl), and global PC (run_pc).

Skeleton pruning is the stable variant: adjacency sets are snapshotted per
conditioning-set size and removals applied at level boundaries, so results
do not depend on edge iteration order. Conditioning sets enumerate by
ascending size, lexicographically within a size, and the first separating
set found is the one recorded.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

from .ci import CiTester
from .cpdag import meek_closure
from .graphs import ARROW, CIRCLE, TAIL, MixedGraph, validate_targets
from .mb import MbConfig, NeighborSets, build_neighbor_sets
from .orient import DEFAULT_RULES, apply_rn, fci_closure, orient_v_structures
from .sepsets import SepsetMap


@dataclass(frozen=True)
class DiscoveryConfig:
    alpha_skel: float = 0.01
    lmax: Optional[int] = 3
    rules: tuple = DEFAULT_RULES
    seed: int = 0


@dataclass
class DiscoveryResult:
    algorithm: str
    graph: MixedGraph
    nodes: tuple[int, ...]
    sepsets: SepsetMap
    neighbor_sets: Optional[NeighborSets]
    ci_tests: int
    timing_ms: dict[str, float]
    flags: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        doc = {
            "algorithm": self.algorithm,
            "nodes": list(self.nodes),
            "graph": self.graph.to_json_dict(),
            "sepsets": self.sepsets.to_json_list(),
            "ci_tests": self.ci_tests,
            "timing_ms": {k: round(v, 3) for k, v in sorted(self.timing_ms.items())},
            "flags": self.flags,
        }
        if self.neighbor_sets is not None:
            doc["neighbor_sets"] = self.neighbor_sets.to_json_dict()
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "DiscoveryResult":
        return cls(
            algorithm=doc["algorithm"],
            graph=MixedGraph.from_json_dict(doc["graph"]),
            nodes=tuple(doc["nodes"]),
            sepsets=SepsetMap.from_json_list(doc["sepsets"]),
            neighbor_sets=(
                NeighborSets.from_json_dict(doc["neighbor_sets"])
                if "neighbor_sets" in doc
                else None
            ),
            ci_tests=int(doc["ci_tests"]),
            timing_ms=dict(doc["timing_ms"]),
            flags=list(doc["flags"]),
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "DiscoveryResult":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


# -- skeleton machinery --------------------------------------------------------


def _complete_working_graph(p: int, nodes) -> MixedGraph:
    g = MixedGraph(p)
    for i, j in combinations(sorted(nodes), 2):
        g.set_edge(i, j, TAIL, TAIL)
    return g


def _prune_levelwise(
    g: MixedGraph,
    tester: CiTester,
    alpha: float,
    lmax: Optional[int],
    sepsets: SepsetMap,
) -> None:
    """Stable union-adjacency pruning, in place: at level l each surviving
    edge is tested against the size-l subsets of the union of its endpoint
    adjacency sets, snapshotted at the level start."""
    level = 0
    while lmax is None or level <= lmax:
        snapshot = [sorted(g.adjacent(v)) for v in range(g.p)]
        removals = []
        deeper = False
        for i, j in sorted(g.skeleton_edges()):
            pool = sorted((set(snapshot[i]) | set(snapshot[j])) - {i, j})
            if len(pool) > level:
                deeper = True
            if len(pool) < level:
                continue
            for s in combinations(pool, level):
                if tester.test(i, j, s, alpha).independent:
                    sepsets.record(i, j, s)
                    removals.append((i, j))
                    break
        for i, j in removals:
            g.remove_edge(i, j)
        if not deeper:
            break
        level += 1


def _phase2_candidate_sets(a: list[int], b: list[int], lmax: Optional[int]):
    """Subsets of a, then of b, ascending size; b-subsets already inside a
    are skipped (they were enumerated on the a side)."""
    a_set = set(a)
    hi = max(len(a), len(b)) if lmax is None else min(lmax, max(len(a), len(b)))
    for size in range(hi + 1):
        if size <= len(a):
            yield from combinations(a, size)
        if size <= len(b):
            for s in combinations(b, size):
                if not set(s) <= a_set:
                    yield s


def phase1_union_skeleton(
    nbs: NeighborSets, tester: CiTester, cfg: DiscoveryConfig, p: int
) -> tuple[MixedGraph, SepsetMap]:
    """First skeleton phase: complete graph over the neighborhood union,
    pruned level-wise with separating sets drawn from that union only."""
    sepsets = SepsetMap()
    g = _complete_working_graph(p, sorted(nbs.union))
    _prune_levelwise(g, tester, cfg.alpha_skel, cfg.lmax, sepsets)
    return g, sepsets


def phase2_local_prune(
    g: MixedGraph,
    sepsets: SepsetMap,
    nbs: NeighborSets,
    tester: CiTester,
    cfg: DiscoveryConfig,
) -> tuple[MixedGraph, SepsetMap]:
    """Second skeleton phase: only edges inside a single target neighborhood
    are revisited, with conditioning sets from the endpoint first-order
    neighbor sets (these reach second-order nodes). Edges between
    neighborhoods are never touched. In place."""
    local_edges = sorted(
        (i, j) for i, j in g.skeleton_edges() if nbs.same_neighborhood(i, j)
    )
    for i, j in local_edges:
        a = sorted(set(nbs.n1[i]) - {j})
        b = sorted(set(nbs.n1[j]) - {i})
        for s in _phase2_candidate_sets(a, b, cfg.lmax):
            if tester.test(i, j, s, cfg.alpha_skel).independent:
                sepsets.record(i, j, s)
                g.remove_edge(i, j)
                break
    return g, sepsets


def _to_circles(g: MixedGraph) -> MixedGraph:
    out = MixedGraph(g.p, g.names)
    for i, j, _, _ in g.edges():
        out.set_edge(i, j, CIRCLE, CIRCLE)
    return out


def _orient_colliders_pdag(g: MixedGraph, sepsets: SepsetMap) -> MixedGraph:
    """Collider orientation on an undirected working graph (PC-style):
    arrowheads accumulate, so conflicting triples can leave a bidirected
    edge in a finite-sample run."""
    for k in range(g.p):
        for i, j in combinations(sorted(g.adjacent(k)), 2):
            if g.has_edge(i, j):
                continue
            sep = sepsets.find(i, j)
            if sep is None or k in sep:
                continue
            g.set_mark(i, k, ARROW)
            g.set_mark(j, k, ARROW)
    return g


def _flag_bidirected(g: MixedGraph, flags: list, same_neighborhood=None) -> None:
    for i, j, mi, mj in g.edges():
        if (mi, mj) == (ARROW, ARROW):
            if same_neighborhood is None or same_neighborhood(i, j):
                entry = {"kind": "bidirected_within_neighborhood", "edge": [i, j]}
                if entry not in flags:
                    flags.append(entry)


# -- the three algorithms -------------------------------------------------------


def run_cml(
    tester: CiTester,
    targets,
    mbcfg: MbConfig,
    cfg: DiscoveryConfig,
    p: Optional[int] = None,
) -> DiscoveryResult:
    """Coordinated learning across all target neighborhoods: two skeleton
    phases, collider orientation from the recorded separating sets, the
    invariant-mark closure, then neighborhood mark simplification."""
    from .mb import _tester_p

    p = p if p is not None else _tester_p(tester)
    targets = validate_targets(p, targets)
    flags: list[dict] = []
    start_count = tester.count
    t0 = time.perf_counter()
    nbs = build_neighbor_sets(targets, tester, mbcfg, p=p)
    t1 = time.perf_counter()
    g, sepsets = phase1_union_skeleton(nbs, tester, cfg, p)
    t2 = time.perf_counter()
    g, sepsets = phase2_local_prune(g, sepsets, nbs, tester, cfg)
    t3 = time.perf_counter()
    g = _to_circles(g)
    orient_v_structures(g, sepsets, flags)
    fci_closure(g, sepsets, rules=cfg.rules, flags=flags)
    apply_rn(g, nbs.same_neighborhood, flags)
    t4 = time.perf_counter()
    _flag_bidirected(g, flags, nbs.same_neighborhood)
    flags.extend(tester.flags)
    g.names = _names_for(tester, p)
    return DiscoveryResult(
        algorithm="cml",
        graph=g,
        nodes=tuple(sorted(nbs.union)),
        sepsets=sepsets,
        neighbor_sets=nbs,
        ci_tests=tester.count - start_count,
        timing_ms={
            "mb": (t1 - t0) * 1e3,
            "phase1": (t2 - t1) * 1e3,
            "phase2": (t3 - t2) * 1e3,
            "orient": (t4 - t3) * 1e3,
            "total": (t4 - t0) * 1e3,
        },
        flags=flags,
    )


def run_snl(
    tester: CiTester,
    targets,
    mbcfg: MbConfig,
    cfg: DiscoveryConfig,
    p: Optional[int] = None,
) -> DiscoveryResult:
    """Single-neighborhood baseline: an independent PC-style pass inside
    each target neighborhood (conditioning sets from first-order neighbor
    sets, so second-order nodes are reachable), then a merge of the
    per-neighborhood graphs. Where overlapping neighborhoods disagree, a
    directed mark beats an undirected one; opposite directions fall back to
    undirected and are flagged."""
    from .mb import _tester_p

    p = p if p is not None else _tester_p(tester)
    targets = validate_targets(p, targets)
    flags: list[dict] = []
    start_count = tester.count
    t0 = time.perf_counter()
    nbs = build_neighbor_sets(targets, tester, mbcfg, p=p)
    t1 = time.perf_counter()
    merged = MixedGraph(p, _names_for(tester, p))
    sepsets = SepsetMap()
    for t in targets:
        nodes = sorted(nbs.nb(t))
        g = _complete_working_graph(p, nodes)
        local_seps = SepsetMap()
        for i, j in sorted(g.skeleton_edges()):
            a = sorted(set(nbs.n1[i]) - {j})
            b = sorted(set(nbs.n1[j]) - {i})
            for s in _phase2_candidate_sets(a, b, cfg.lmax):
                if tester.test(i, j, s, cfg.alpha_skel).independent:
                    local_seps.record(i, j, s)
                    g.remove_edge(i, j)
                    break
        _orient_colliders_pdag(g, local_seps)
        meek_closure(g)
        _merge_snl(merged, g, flags)
        sepsets.merge_missing(local_seps)
    t2 = time.perf_counter()
    _flag_bidirected(merged, flags, nbs.same_neighborhood)
    flags.extend(tester.flags)
    return DiscoveryResult(
        algorithm="snl",
        graph=merged,
        nodes=tuple(sorted(nbs.union)),
        sepsets=sepsets,
        neighbor_sets=nbs,
        ci_tests=tester.count - start_count,
        timing_ms={
            "mb": (t1 - t0) * 1e3,
            "neighborhoods": (t2 - t1) * 1e3,
            "total": (t2 - t0) * 1e3,
        },
        flags=flags,
    )


def _edge_class(mi: int, mj: int) -> str:
    if (mi, mj) == (TAIL, ARROW):
        return "fwd"
    if (mi, mj) == (ARROW, TAIL):
        return "rev"
    if (mi, mj) == (ARROW, ARROW):
        return "bi"
    return "un"


_CLASS_MARKS = {
    "fwd": (TAIL, ARROW),
    "rev": (ARROW, TAIL),
    "bi": (ARROW, ARROW),
    "un": (TAIL, TAIL),
}


def _merge_snl(merged: MixedGraph, g: MixedGraph, flags: list) -> None:
    for i, j, mi, mj in g.edges():
        if not merged.has_edge(i, j):
            merged.set_edge(i, j, mi, mj)
            continue
        had = _edge_class(merged.mark(j, i), merged.mark(i, j))
        new = _edge_class(mi, mj)
        if had == new:
            continue
        pair = {had, new}
        if "un" in pair and "bi" not in pair:
            result = (pair - {"un"}).pop()  # the directed mark is more informative
        elif pair == {"fwd", "rev"}:
            result = "un"
            flags.append({"kind": "snl_orientation_conflict", "edge": [i, j]})
        else:  # bidirected against anything stays bidirected, flagged
            result = "bi"
            flags.append({"kind": "snl_orientation_conflict", "edge": [i, j]})
        a, b = _CLASS_MARKS[result]
        merged.set_mark(j, i, a)
        merged.set_mark(i, j, b)


def run_pc(tester: CiTester, cfg: DiscoveryConfig, p: Optional[int] = None) -> DiscoveryResult:
    """Global baseline: stable PC over every node, collider orientation,
    then the standard orientation closure for fully observed graphs."""
    from .mb import _tester_p

    p = p if p is not None else _tester_p(tester)
    flags: list[dict] = []
    start_count = tester.count
    t0 = time.perf_counter()
    sepsets = SepsetMap()
    g = _complete_working_graph(p, range(p))
    _prune_levelwise(g, tester, cfg.alpha_skel, cfg.lmax, sepsets)
    t1 = time.perf_counter()
    _orient_colliders_pdag(g, sepsets)
    meek_closure(g)
    t2 = time.perf_counter()
    _flag_bidirected(g, flags)
    flags.extend(tester.flags)
    g.names = _names_for(tester, p)
    return DiscoveryResult(
        algorithm="pc",
        graph=g,
        nodes=tuple(range(p)),
        sepsets=sepsets,
        neighbor_sets=None,
        ci_tests=tester.count - start_count,
        timing_ms={
            "skeleton": (t1 - t0) * 1e3,
            "orient": (t2 - t1) * 1e3,
            "total": (t2 - t0) * 1e3,
        },
        flags=flags,
    )


def _names_for(tester: CiTester, p: int):
    dag = getattr(tester, "dag", None)
    if dag is not None and dag.p == p:
        return dag.names
    return None
