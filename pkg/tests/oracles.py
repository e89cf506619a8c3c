"""Brute-force reference implementations used only as test oracles.

Everything here enumerates simple paths or closes relations transitively,
with no shortcuts, so it stays independent of the reachability-based
implementations in the package.
"""

from itertools import combinations

from cml.graphs import ARROW, TAIL, MixedGraph


def brute_ancestors(g: MixedGraph, j: int) -> set:
    """Reflexive-transitive closure of the parent relation, by iteration."""
    out = {j}
    changed = True
    while changed:
        changed = False
        for i, k, mi, mk in g.edges():
            if mi == TAIL and mk == ARROW and k in out and i not in out:
                out.add(i)
                changed = True
            if mk == TAIL and mi == ARROW and i in out and k not in out:
                out.add(k)
                changed = True
    return out


def all_simple_paths(g: MixedGraph, i: int, j: int):
    """Yield every simple path from i to j as a node list."""
    path = [i]
    on_path = {i}

    def extend(u):
        for v in sorted(g.adjacent(u)):
            if v == j:
                yield path + [j]
            elif v not in on_path:
                path.append(v)
                on_path.add(v)
                yield from extend(v)
                path.pop()
                on_path.discard(v)

    yield from extend(i)


def _is_collider(g: MixedGraph, a: int, v: int, b: int) -> bool:
    return g.mark(a, v) == ARROW and g.mark(b, v) == ARROW


def brute_m_connecting_path_exists(g: MixedGraph, i: int, j: int, s) -> bool:
    s = set(s)
    an_s = set()
    for d in s:
        an_s |= brute_ancestors(g, d)
    for path in all_simple_paths(g, i, j):
        ok = True
        for idx in range(1, len(path) - 1):
            a, v, b = path[idx - 1], path[idx], path[idx + 1]
            if _is_collider(g, a, v, b):
                if v not in an_s:
                    ok = False
                    break
            elif v in s:
                ok = False
                break
        if ok:
            return True
    return False


def brute_m_separated(g: MixedGraph, i: int, j: int, s) -> bool:
    return not brute_m_connecting_path_exists(g, i, j, s)


def brute_inducing_path_exists(g: MixedGraph, i: int, j: int, l) -> bool:
    """Every intermediate outside l must be a collider; every collider on
    the path (in or out of l) must be an ancestor of i or j."""
    l = set(l)
    an_ij = brute_ancestors(g, i) | brute_ancestors(g, j)
    for path in all_simple_paths(g, i, j):
        ok = True
        for idx in range(1, len(path) - 1):
            a, v, b = path[idx - 1], path[idx], path[idx + 1]
            if _is_collider(g, a, v, b):
                if v not in an_ij:
                    ok = False
                    break
            elif v not in l:
                ok = False
                break
        if ok:
            return True
    return False


def brute_has_directed_cycle(g: MixedGraph) -> bool:
    """A directed cycle exists iff two distinct nodes are mutual ancestors."""
    for i in range(g.p):
        an_i = brute_ancestors(g, i)
        for j in an_i:
            if j != i and i in brute_ancestors(g, j):
                return True
    return False


def brute_is_ancestral(g: MixedGraph) -> bool:
    if brute_has_directed_cycle(g):
        return False
    for i, j, mi, mj in g.edges():
        if mi == ARROW and mj == ARROW:
            if j in brute_ancestors(g, i) or i in brute_ancestors(g, j):
                return False
    return True


def brute_markov_equivalent_dags(g1, g2) -> bool:
    """Same skeleton and same v-structures (Verma-Pearl criterion)."""
    if g1.skeleton_edges() != g2.skeleton_edges():
        return False

    def vstructs(g):
        out = set()
        for k in range(g.p):
            pa = sorted(g.parents(k))
            for a, b in combinations(pa, 2):
                if not g.has_edge(a, b):
                    out.add((a, k, b))
        return out

    return vstructs(g1) == vstructs(g2)
