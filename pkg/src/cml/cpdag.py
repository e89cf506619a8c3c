"""CPDAG construction: v-structures plus Meek closure.

Works on graphs whose edges are either undirected (tail-tail) or directed
(tail-arrow). Bidirected edges that finite-sample collider orientation may
produce are left alone by every rule here.
"""

from __future__ import annotations

from itertools import combinations

from .graphs import ARROW, TAIL, Dag, MixedGraph


def vstructures(g: Dag) -> set[tuple[int, int, int]]:
    """Unshielded colliders (i, k, j) with i < j, parents of k."""
    out = set()
    for k in range(g.p):
        for i, j in combinations(sorted(g.parents(k)), 2):
            if not g.has_edge(i, j):
                out.add((i, k, j))
    return out


def _undirected(g: MixedGraph, i: int, j: int) -> bool:
    return g.mark(i, j) == TAIL and g.mark(j, i) == TAIL


def _orient(g: MixedGraph, i: int, j: int) -> bool:
    """Turn the undirected edge i -- j into i -> j."""
    if not _undirected(g, i, j):
        return False
    g.set_mark(i, j, ARROW)
    return True


def meek_rule_1(g: MixedGraph) -> bool:
    changed = False
    for b in range(g.p):
        parents = [a for a in sorted(g.adjacent(b)) if g.is_directed_edge(a, b)]
        if not parents:
            continue
        for c in sorted(g.adjacent(b)):
            if _undirected(g, b, c) and any(not g.has_edge(a, c) for a in parents):
                changed |= _orient(g, b, c)
    return changed


def meek_rule_2(g: MixedGraph) -> bool:
    changed = False
    for a in range(g.p):
        for c in sorted(g.adjacent(a)):
            if not _undirected(g, a, c):
                continue
            if any(
                g.is_directed_edge(a, b) and g.is_directed_edge(b, c)
                for b in sorted(g.adjacent(a) & g.adjacent(c))
            ):
                changed |= _orient(g, a, c)
    return changed


def meek_rule_3(g: MixedGraph) -> bool:
    changed = False
    for a in range(g.p):
        und = [v for v in sorted(g.adjacent(a)) if _undirected(g, a, v)]
        for b in und:
            into_b = [
                c
                for c in und
                if c != b and g.has_edge(c, b) and g.is_directed_edge(c, b)
            ]
            fired = False
            for c, d in combinations(into_b, 2):
                if not g.has_edge(c, d):
                    changed |= _orient(g, a, b)
                    fired = True
                    break
            if fired:
                continue
    return changed


def meek_rule_4(g: MixedGraph) -> bool:
    """a -- b with a chain c -> d -> b, a adjacent to c, and b, c not
    adjacent compels a -> b (else b -> a closes a cycle or forms a new
    unshielded collider at a)."""
    changed = False
    for a in range(g.p):
        for b in sorted(g.adjacent(a)):
            if not _undirected(g, a, b):
                continue
            done = False
            for c in sorted(g.adjacent(a)):
                if c == b or g.has_edge(c, b):
                    continue
                for d in sorted(g.adjacent(c)):
                    if g.is_directed_edge(c, d) and g.is_directed_edge(d, b):
                        changed |= _orient(g, a, b)
                        done = True
                        break
                if done:
                    break
    return changed


MEEK_RULES = (meek_rule_1, meek_rule_2, meek_rule_3, meek_rule_4)


def meek_closure(g: MixedGraph) -> MixedGraph:
    """Apply the four orientation rules until none fires. In place."""
    while True:
        if not any(rule(g) for rule in MEEK_RULES):
            return g


def cpdag(g: Dag) -> MixedGraph:
    """Skeleton, v-structure arrowheads, then Meek closure: compelled edges
    directed, reversible edges undirected."""
    out = MixedGraph(g.p, g.names)
    for i, j, _, _ in g.edges():
        out.set_edge(i, j, TAIL, TAIL)
    for i, k, j in sorted(vstructures(g)):
        out.set_mark(i, k, ARROW)
        out.set_mark(j, k, ARROW)
    return meek_closure(out)
