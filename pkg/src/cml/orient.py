"""Orientation of partially marked graphs: collider identification, the
invariant-mark closure rules for ancestral-graph discovery, and the final
within-neighborhood mark simplification.

Rule numbering follows the standard constraint-based closure set for graphs
without selection bias: colliders (rule 0), the three local arrow rules
(1-3), the discriminating-path rule (4), and the three tail rules (8-10).
Each rule is its own function so it can be unit-tested in isolation.

Marks only ever upgrade from circles; an attempt to flip a committed tail
or arrowhead is recorded as a conflict flag and ignored, which is the
accumulate-and-flag policy for contradictory finite-sample evidence.
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional

from .graphs import ARROW, CIRCLE, TAIL, MixedGraph
from .sepsets import SepsetMap

DEFAULT_RULES = (1, 2, 3, 4, 8, 9, 10)


class MissingSepsetError(KeyError):
    """A non-adjacent pair has no recorded separating set."""


def _set_mark(g: MixedGraph, i: int, j: int, mark_at_j: int, flags: list) -> bool:
    cur = g.mark(i, j)
    if cur == mark_at_j:
        return False
    if cur == CIRCLE:
        g.set_mark(i, j, mark_at_j)
        return True
    flags.append(
        {
            "kind": "orientation_conflict",
            "edge": [min(i, j), max(i, j)],
            "at": j,
            "have": int(cur),
            "want": int(mark_at_j),
        }
    )
    return False


def orient_v_structures(g: MixedGraph, sepsets: SepsetMap, flags: Optional[list] = None) -> MixedGraph:
    """Rule 0: for each unshielded triple i - k - j with k outside the
    recorded separating set of (i, j), put arrowheads at k. In place."""
    flags = flags if flags is not None else []
    for k in range(g.p):
        for i, j in combinations(sorted(g.adjacent(k)), 2):
            if g.has_edge(i, j):
                continue
            sep = sepsets.find(i, j)
            if sep is None:
                raise MissingSepsetError(f"pair ({i}, {j}) has no recorded separating set")
            if k not in sep:
                _set_mark(g, i, k, ARROW, flags)
                _set_mark(g, j, k, ARROW, flags)
    return g


# -- arrow rules ---------------------------------------------------------------


def rule_1(g: MixedGraph, flags: list) -> bool:
    """a *-> b o-* c with a, c non-adjacent: orient b -> c."""
    changed = False
    for b in range(g.p):
        arrows_in = [a for a in sorted(g.adjacent(b)) if g.mark(a, b) == ARROW]
        if not arrows_in:
            continue
        for c in sorted(g.adjacent(b)):
            if g.mark(c, b) != CIRCLE:  # circle must sit at b's end of (b, c)
                continue
            if any(a != c and not g.has_edge(a, c) for a in arrows_in):
                changed |= _set_mark(g, c, b, TAIL, flags)
                changed |= _set_mark(g, b, c, ARROW, flags)
    return changed


def rule_2(g: MixedGraph, flags: list) -> bool:
    """a -> b *-> c or a *-> b -> c, with a *-o c: arrowhead at c."""
    changed = False
    for a in range(g.p):
        for c in sorted(g.adjacent(a)):
            if g.mark(a, c) != CIRCLE:
                continue
            for b in sorted(g.adjacent(a) & g.adjacent(c)):
                first_directed = g.is_directed_edge(a, b) and g.mark(b, c) == ARROW
                second_directed = g.mark(a, b) == ARROW and g.is_directed_edge(b, c)
                if first_directed or second_directed:
                    changed |= _set_mark(g, a, c, ARROW, flags)
                    break
    return changed


def rule_3(g: MixedGraph, flags: list) -> bool:
    """a *-> b <-* c, a *-o d o-* c, a, c non-adjacent, d *-o b:
    arrowhead at b on (d, b)."""
    changed = False
    for b in range(g.p):
        arrows_in = [x for x in sorted(g.adjacent(b)) if g.mark(x, b) == ARROW]
        for a, c in combinations(arrows_in, 2):
            if g.has_edge(a, c):
                continue
            for d in sorted((g.adjacent(a) & g.adjacent(c) & g.adjacent(b)) - {a, c}):
                if g.mark(a, d) == CIRCLE and g.mark(c, d) == CIRCLE and g.mark(d, b) == CIRCLE:
                    changed |= _set_mark(g, d, b, ARROW, flags)
    return changed


# -- discriminating paths (rule 4) ---------------------------------------------


def find_discriminating_path(g: MixedGraph, b: int, c: int) -> Optional[list[int]]:
    """Search for a path <theta, ..., a, b, c> where every vertex strictly
    between theta and b is a collider on the path and a parent of c, and
    theta is not adjacent to c. Returns [b, a, ..., theta], else None.
    Depth-first over simple paths; interior nodes come from pa(c)."""
    if not g.has_edge(b, c):
        return None
    path = [b]
    on_path = {b, c}

    def extend(cur: int) -> Optional[list[int]]:
        cur_interior = cur != b
        for w in sorted(g.adjacent(cur)):
            if w in on_path:
                continue
            # an interior node needs arrowheads at it on both path edges;
            # the far-side arrowhead of cur gets fixed by stepping to w
            if cur_interior and g.mark(w, cur) != ARROW:
                continue
            if not g.has_edge(w, c):
                if cur_interior:  # guarantees at least three edges
                    return path + [w]
                continue
            # w can only be interior: a parent of c with its near-side arrow
            if not (g.is_directed_edge(w, c) and g.mark(cur, w) == ARROW):
                continue
            path.append(w)
            on_path.add(w)
            found = extend(w)
            if found:
                return found
            path.pop()
            on_path.discard(w)
        return None

    return extend(b)


def rule_4(g: MixedGraph, sepsets: SepsetMap, flags: list) -> bool:
    """Discriminating path <theta,...,a,b,c> with a circle at b on (b, c):
    orient b -> c when b sits in the recorded separating set of (theta, c),
    else make (a, b) and (b, c) both bidirected."""
    changed = False
    for c in range(g.p):
        for b in sorted(g.adjacent(c)):
            if g.mark(c, b) != CIRCLE:
                continue
            found = find_discriminating_path(g, b, c)
            if found is None:
                continue
            theta = found[-1]
            sep = sepsets.find(theta, c)
            if sep is not None and b in sep:
                changed |= _set_mark(g, c, b, TAIL, flags)
                changed |= _set_mark(g, b, c, ARROW, flags)
            else:
                a = found[1]
                changed |= _set_mark(g, b, a, ARROW, flags)
                changed |= _set_mark(g, a, b, ARROW, flags)
                changed |= _set_mark(g, c, b, ARROW, flags)
                changed |= _set_mark(g, b, c, ARROW, flags)
    return changed


# -- tail rules ----------------------------------------------------------------


def _pd_edge(g: MixedGraph, u: int, v: int) -> bool:
    """Edge traversable u to v on a potentially directed path: no arrowhead
    at u, no tail at v."""
    return g.mark(v, u) != ARROW and g.mark(u, v) != TAIL


def _uncovered_pd_reaches(g: MixedGraph, a: int, first: int, goal: int) -> bool:
    """Is there an uncovered potentially directed path a, first, ..., goal?"""
    if first == goal:
        return True
    visited = {a, first}

    def walk(prev: int, cur: int) -> bool:
        for w in sorted(g.adjacent(cur)):
            if w in visited or g.has_edge(prev, w):
                continue
            if not _pd_edge(g, cur, w):
                continue
            if w == goal:
                return True
            visited.add(w)
            if walk(cur, w):
                return True
            visited.discard(w)
        return False

    return walk(a, first)


def rule_8(g: MixedGraph, flags: list) -> bool:
    """a -> b -> c (or a -o b -> c) with a o-> c: tail at a."""
    changed = False
    for a in range(g.p):
        for c in sorted(g.adjacent(a)):
            if not (g.mark(c, a) == CIRCLE and g.mark(a, c) == ARROW):
                continue
            for b in sorted(g.adjacent(a) & g.adjacent(c)):
                a_side = g.is_directed_edge(a, b) or (
                    g.mark(b, a) == TAIL and g.mark(a, b) == CIRCLE
                )
                if a_side and g.is_directed_edge(b, c):
                    changed |= _set_mark(g, c, a, TAIL, flags)
                    break
    return changed


def rule_9(g: MixedGraph, flags: list) -> bool:
    """a o-> c with an uncovered potentially directed path a, b, ..., c
    whose first hop b is not adjacent to c: tail at a."""
    changed = False
    for a in range(g.p):
        for c in sorted(g.adjacent(a)):
            if not (g.mark(c, a) == CIRCLE and g.mark(a, c) == ARROW):
                continue
            for b in sorted(g.adjacent(a)):
                if b == c or g.has_edge(b, c):
                    continue
                if not _pd_edge(g, a, b):
                    continue
                if _uncovered_pd_reaches(g, a, b, c):
                    changed |= _set_mark(g, c, a, TAIL, flags)
                    break
    return changed


def rule_10(g: MixedGraph, flags: list) -> bool:
    """a o-> c with parents b -> c <- d reached by two uncovered potentially
    directed paths out of a whose first hops differ and are non-adjacent:
    tail at a."""
    changed = False
    for a in range(g.p):
        circle_arrows = [
            c
            for c in sorted(g.adjacent(a))
            if g.mark(c, a) == CIRCLE and g.mark(a, c) == ARROW
        ]
        for c in circle_arrows:
            parents = [x for x in sorted(g.adjacent(c)) if x != a and g.is_directed_edge(x, c)]
            if len(parents) < 2:
                continue
            hops = {}
            for x in parents:
                hops[x] = {
                    m
                    for m in sorted(g.adjacent(a))
                    if _pd_edge(g, a, m) and _uncovered_pd_reaches(g, a, m, x)
                }
            fired = False
            for b, d in combinations(parents, 2):
                for mu in sorted(hops[b]):
                    for om in sorted(hops[d]):
                        if mu != om and not g.has_edge(mu, om):
                            changed |= _set_mark(g, c, a, TAIL, flags)
                            fired = True
                            break
                    if fired:
                        break
                if fired:
                    break
    return changed


def fci_closure(
    g: MixedGraph,
    sepsets: SepsetMap,
    rules=DEFAULT_RULES,
    flags: Optional[list] = None,
) -> MixedGraph:
    """Iterate the enabled rules until none fires. In place."""
    flags = flags if flags is not None else []
    table = {
        1: lambda: rule_1(g, flags),
        2: lambda: rule_2(g, flags),
        3: lambda: rule_3(g, flags),
        4: lambda: rule_4(g, sepsets, flags),
        8: lambda: rule_8(g, flags),
        9: lambda: rule_9(g, flags),
        10: lambda: rule_10(g, flags),
    }
    active = [table[r] for r in rules]
    while True:
        changed = False
        for fn in active:
            changed |= fn()
        if not changed:
            return g


def apply_rn(g: MixedGraph, same_neighborhood, flags: Optional[list] = None) -> MixedGraph:
    """Within a shared target neighborhood, a circle-circle edge becomes
    undirected and a circle-arrow edge becomes directed; a bidirected edge
    there is kept but flagged (finite-sample conflict, read as undirected
    downstream). ``same_neighborhood`` is a predicate over node pairs.
    In place."""
    flags = flags if flags is not None else []
    for i, j, mi, mj in list(g.edges()):
        if not same_neighborhood(i, j):
            continue
        if (mi, mj) == (CIRCLE, CIRCLE):
            g.set_mark(j, i, TAIL)
            g.set_mark(i, j, TAIL)
        elif (mi, mj) == (CIRCLE, ARROW):
            g.set_mark(j, i, TAIL)
        elif (mi, mj) == (ARROW, CIRCLE):
            g.set_mark(i, j, TAIL)
        elif (mi, mj) == (ARROW, ARROW):
            flags.append({"kind": "bidirected_within_neighborhood", "edge": [i, j]})
    return g
