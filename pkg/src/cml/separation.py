"""Ancestry, d/m-separation, and inducing-path queries.

Separation is decided by reachability over half-edge states (see
_pykernels), not by path enumeration; the brute-force enumerators live in
the test suite as oracles.
"""

from __future__ import annotations

from typing import Iterable

from . import backend
from .graphs import ARROW, Dag, GraphError, MixedGraph, TAIL


def ancestors(g: MixedGraph, j: int) -> set[int]:
    """Nodes i with i == j or a directed path i -> ... -> j."""
    g.check_node(j)
    return backend.graph_kernel(g).ancestors((j,))

def ancestors_of_set(g: MixedGraph, seeds: Iterable[int]) -> set[int]:
    seeds = tuple(seeds)
    for s in seeds:
        g.check_node(s)
    return backend.graph_kernel(g).ancestors(seeds)


def descendants(g: MixedGraph, i: int) -> set[int]:
    """Nodes j with j == i or a directed path i -> ... -> j."""
    g.check_node(i)
    out = {i}
    stack = [i]
    while stack:
        u = stack.pop()
        for v in g.children(u):
            if v not in out:
                out.add(v)
                stack.append(v)
    return out


def is_ancestral(g: MixedGraph) -> bool:
    """No directed cycle and no almost directed cycle (i <-> j, j in an(i))."""
    cached = g._ancestral_cache
    if cached is not None and cached[0] == g._version:
        return cached[1]
    kern = backend.graph_kernel(g)
    an = {}

    def an_of(v):
        if v not in an:
            an[v] = kern.ancestors((v,))
        return an[v]

    ok = True
    for i, j, mi, mj in g.edges():
        if mi == ARROW and mj == ARROW:  # almost directed cycle?
            if j in an_of(i) or i in an_of(j):
                ok = False
                break
        elif mi == TAIL and mj == ARROW:  # i -> j: directed cycle?
            if j in an_of(i):
                ok = False
                break
        elif mi == ARROW and mj == TAIL:  # j -> i
            if i in an_of(j):
                ok = False
                break
    g._ancestral_cache = (g._version, ok)
    return ok


def _check_query(g: MixedGraph, i: int, j: int, s: Iterable[int]) -> tuple[int, ...]:
    g.check_node(i)
    g.check_node(j)
    s = tuple(sorted(set(int(v) for v in s)))
    for v in s:
        g.check_node(v)
    if i == j:
        raise GraphError("endpoints must differ")
    if i in s or j in s:
        raise GraphError("conditioning set must exclude the endpoints")
    return s


def m_separated(g: MixedGraph, i: int, j: int, s: Iterable[int]) -> bool:
    """True iff no m-connecting path between i and j given s."""
    s = _check_query(g, i, j, s)
    if not is_ancestral(g):
        raise GraphError("m-separation requires an ancestral graph")
    return not backend.graph_kernel(g).m_connected(i, j, s)


def d_separated(g: Dag, i: int, j: int, s: Iterable[int]) -> bool:
    """d-separation on a DAG; identical to m-separation (DAGs are ancestral)."""
    s = _check_query(g, i, j, s)
    return not backend.graph_kernel(g).m_connected(i, j, s)


def inducing_path_exists(g: MixedGraph, i: int, j: int, l: Iterable[int]) -> bool:
    """True iff some path from i to j is inducing relative to ``l``: every
    intermediate node outside ``l`` is a collider on the path, and every
    collider on the path (whether in ``l`` or not) is an ancestor of i or j.

    The ancestor condition binds colliders inside ``l`` too; without it, a
    blocked collider route through an exempt node would count, declaring
    pairs adjacent that every separating set in fact separates.

    Simple-path depth-first search with collider-ancestor pruning; meant
    for test-scale graphs, not the query hot path.
    """
    l = set(_check_query(g, i, j, l))
    an_ij = ancestors_of_set(g, (i, j))
    on_path = {i}

    def ok_intermediate(prev: int, v: int, nxt: int) -> bool:
        if g.mark(prev, v) == ARROW and g.mark(nxt, v) == ARROW:
            return v in an_ij
        return v in l

    def extend(cur: int, prev: int) -> bool:
        for w in sorted(g.adjacent(cur)):
            if w in on_path:
                continue
            if cur != i and not ok_intermediate(prev, cur, w):
                continue
            if w == j:
                return True
            on_path.add(w)
            if extend(w, cur):
                return True
            on_path.discard(w)
        return False

    return extend(i, -1)
