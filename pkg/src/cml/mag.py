"""Ground-truth local graphs: blankets, neighborhood unions, the target-set
ancestral graph, and its validity checks."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .graphs import ARROW, TAIL, Dag, MixedGraph, validate_targets
from .separation import ancestors, ancestors_of_set, inducing_path_exists, is_ancestral


def markov_blanket(g: Dag, i: int) -> set[int]:
    """Parents, children, and spouses (co-parents of children) of i."""
    g.check_node(i)
    pa = g.parents(i)
    ch = g.children(i)
    sp = set()
    for c in ch:
        sp |= g.parents(c)
    return (pa | ch | sp) - {i}


def neighborhood(g: Dag, t: int) -> set[int]:
    return markov_blanket(g, t) | {t}


def neighborhood_union(g: Dag, targets: Iterable[int]) -> set[int]:
    n: set[int] = set()
    for t in targets:
        n |= neighborhood(g, t)
    return n


def between_pairs(g: Dag, targets) -> set[tuple[int, int]]:
    """Node pairs in the union that share no target neighborhood."""
    targets = validate_targets(g.p, targets)
    nbs = [neighborhood(g, t) for t in targets]
    n = set().union(*nbs)
    out = set()
    for i, j in combinations(sorted(n), 2):
        if not any(i in nb and j in nb for nb in nbs):
            out.add((i, j))
    return out


def ground_truth_mag(g: Dag, targets) -> MixedGraph:
    """Induced subgraph over the neighborhood union, plus one edge for each
    between-neighborhood pair connected by an inducing path relative to the
    complement, oriented by ancestry (bidirected when neither end is an
    ancestor of the other)."""
    targets = validate_targets(g.p, targets)
    n = neighborhood_union(g, targets)
    l = set(range(g.p)) - n
    out = g.induced(n)
    mixed = MixedGraph(g.p, g.names)
    for i, j, mi, mj in out.edges():
        mixed.set_edge(i, j, mi, mj)
    for i, j in sorted(between_pairs(g, targets)):
        if mixed.has_edge(i, j):
            continue  # adjacent in the underlying graph already
        if inducing_path_exists(g, i, j, l):
            if i in ancestors(g, j):
                mixed.set_edge(i, j, TAIL, ARROW)
            elif j in ancestors(g, i):
                mixed.set_edge(i, j, ARROW, TAIL)
            else:
                mixed.set_edge(i, j, ARROW, ARROW)
    return mixed


def check_assumption_inp(g: Dag, targets) -> bool:
    """True iff no inducing path (relative to the nodes outside the union)
    between two nodes of one neighborhood passes through another
    neighborhood.

    Enumerates candidate paths by depth-first search; the collider-ancestor
    constraint prunes hard, so this is fine at test scale.
    """
    targets = validate_targets(g.p, targets)
    nbs = {t: neighborhood(g, t) for t in targets}
    n = set().union(*nbs.values())
    l = set(range(g.p)) - n
    for t in targets:
        nb = nbs[t]
        outside = n - nb
        if not outside:
            continue
        for i, j in combinations(sorted(nb), 2):
            if _inducing_path_through(g, i, j, l, outside):
                return False
    return True


def _inducing_path_through(g: Dag, i: int, j: int, l: set, must_hit: set) -> bool:
    """Is there an inducing path relative to ``l`` from i to j with at least
    one intermediate node in ``must_hit``? Simple-path DFS."""
    an_ij = ancestors_of_set(g, (i, j))
    path = [i]
    on_path = {i}

    def ok_intermediate(prev, v, nxt) -> bool:
        if g.mark(prev, v) == ARROW and g.mark(nxt, v) == ARROW:
            return v in an_ij  # a collider must be an endpoint ancestor
        return v in l  # a non-collider is only allowed when exempt

    def extend(cur, prev) -> bool:
        for w in sorted(g.adjacent(cur)):
            if w in on_path:
                continue
            # extending to w fixes cur's role as an intermediate node
            if cur != i and not ok_intermediate(prev, cur, w):
                continue
            if w == j:
                if any(v in must_hit for v in path[1:]):
                    return True
                continue
            path.append(w)
            on_path.add(w)
            if extend(w, cur):
                return True
            path.pop()
            on_path.discard(w)
        return False

    return extend(i, -1)


def validate_mag(g: MixedGraph) -> bool:
    """No directed or almost directed cycle, and no inducing path between
    non-adjacent nodes (checked within g, relative to the empty set).

    The maximality check enumerates inducing paths; intended for test-scale
    graphs (a few hundred nodes).
    """
    if not is_ancestral(g):
        return False
    active = [v for v in range(g.p) if g.adjacent(v)]
    for i, j in combinations(active, 2):
        if not g.has_edge(i, j) and inducing_path_exists(g, i, j, ()):
            return False
    return True
