"""Reference constructions for pipeline-level checks.

``reference_pag`` derives the expected discovery output directly from the
ground-truth local ancestral graph: true skeleton, separating sets found by
m-separation search on that graph, collider orientation, rule closure, and
the neighborhood mark simplification. It shares the orientation rules with
the pipeline but none of the skeleton or blanket machinery.
"""

from itertools import combinations

from cml.graphs import CIRCLE, MixedGraph
from cml.mag import ground_truth_mag, markov_blanket, neighborhood_union
from cml.orient import apply_rn, fci_closure, orient_v_structures
from cml.separation import m_separated
from cml.sepsets import SepsetMap


def true_sepsets(mag: MixedGraph, nodes) -> SepsetMap:
    """For every non-adjacent pair over ``nodes``, one m-separating set:
    endpoint-adjacency subsets are searched first (they almost always
    contain one), then all subsets of ``nodes``."""
    nodes = sorted(nodes)
    seps = SepsetMap()
    for i, j in combinations(nodes, 2):
        if mag.has_edge(i, j):
            continue
        found = _find_separator(mag, i, j, nodes)
        if found is None:
            raise AssertionError(f"no m-separator for non-adjacent pair ({i}, {j})")
        seps.record(i, j, found)
    return seps


def _find_separator(mag, i, j, nodes):
    local = sorted((mag.adjacent(i) | mag.adjacent(j)) - {i, j})
    for size in range(len(local) + 1):
        for s in combinations(local, size):
            if m_separated(mag, i, j, s):
                return s
    rest = [v for v in nodes if v not in (i, j)]
    for size in range(len(rest) + 1):
        for s in combinations(rest, size):
            if m_separated(mag, i, j, s):
                return s
    return None


def reference_pag(dag, targets) -> MixedGraph:
    """Expected output of coordinated discovery under a perfect oracle."""
    mag = ground_truth_mag(dag, targets)
    nodes = sorted(neighborhood_union(dag, targets))
    seps = true_sepsets(mag, nodes)
    g = MixedGraph(dag.p, dag.names)
    for i, j, _, _ in mag.edges():
        g.set_edge(i, j, CIRCLE, CIRCLE)
    orient_v_structures(g, seps)
    fci_closure(g, seps)
    nbs = {t: markov_blanket(dag, t) | {t} for t in targets}
    apply_rn(g, lambda i, j: any(i in nb and j in nb for nb in nbs.values()))
    return g
