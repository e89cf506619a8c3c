"""Endpoint-marked mixed graphs (DAGs, MAGs, PAGs, CPDAGs share one container).

An edge between i and j carries one mark at each end. Marks are tails,
arrowheads, or circles:

    i -> j   mark TAIL at i, mark ARROW at j       (directed)
    i <-> j  ARROW at both ends                    (bidirected)
    i -- j   TAIL at both ends                     (undirected)
    i o-o j  CIRCLE at both ends                   (unknown)

``MixedGraph.mark(i, j)`` returns the mark at the *j* end of the edge.
Graphs always live in the index space ``0..p-1``; algorithms that operate on
a subset of nodes simply leave the rest isolated.
"""

from __future__ import annotations

import json
from enum import IntEnum
from itertools import combinations
from typing import Iterator, Optional, Sequence


class Mark(IntEnum):
    TAIL = 1
    ARROW = 2
    CIRCLE = 3


TAIL = int(Mark.TAIL)
ARROW = int(Mark.ARROW)
CIRCLE = int(Mark.CIRCLE)

_MARK_TO_STR = {TAIL: "t", ARROW: "a", CIRCLE: "c"}
_STR_TO_MARK = {"t": TAIL, "a": ARROW, "c": CIRCLE}

# Above this node count the endpoint table switches from a dense numpy matrix
# to per-node dictionaries; adjacency queries stay O(1) either way.
DENSE_NODE_LIMIT = 4096


class GraphError(ValueError):
    """Malformed graph input (bad index, self loop, wrong graph class)."""


class CyclicInputError(GraphError):
    """An edge set declared acyclic contains a directed cycle."""


class MixedGraph:
    """Mutable endpoint-marked graph over nodes ``0..p-1``."""

    __slots__ = (
        "p",
        "names",
        "_adj",
        "_dense",
        "_marks",
        "_version",
        "_csr_cache",
        "_kernel_cache",
        "_ancestral_cache",
    )

    def __init__(self, p: int, names: Optional[Sequence[str]] = None):
        if p < 0:
            raise GraphError(f"node count must be non-negative, got {p}")
        if names is not None:
            names = tuple(names)
            if len(names) != p:
                raise GraphError(f"{len(names)} names for {p} nodes")
            if len(set(names)) != p:
                raise GraphError("node names must be unique")
        self.p = p
        self.names = names
        self._adj: list[set[int]] = [set() for _ in range(p)]
        self._dense = p <= DENSE_NODE_LIMIT
        if self._dense:
            import numpy as np

            self._marks = np.zeros((p, p), dtype=np.int8)
        else:
            self._marks = [dict() for _ in range(p)]
        self._version = 0
        self._csr_cache = None
        self._kernel_cache = None
        self._ancestral_cache = None

    # -- basic queries ----------------------------------------------------

    def check_node(self, i: int) -> None:
        if not 0 <= i < self.p:
            raise GraphError(f"node index {i} out of range for p={self.p}")

    def has_edge(self, i: int, j: int) -> bool:
        return j in self._adj[i]

    def adjacent(self, i: int) -> set[int]:
        """Adjacency set of i (shared reference; do not mutate)."""
        return self._adj[i]

    def mark(self, i: int, j: int) -> int:
        """Mark at the j end of edge (i, j); 0 if the edge is absent."""
        if self._dense:
            return int(self._marks[i, j])
        return self._marks[i].get(j, 0)

    def edge_count(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def edges(self) -> Iterator[tuple[int, int, int, int]]:
        """Yield (i, j, mark_at_i, mark_at_j) with i < j, sorted."""
        for i in range(self.p):
            for j in sorted(self._adj[i]):
                if j > i:
                    yield i, j, self.mark(j, i), self.mark(i, j)

    def is_directed_edge(self, i: int, j: int) -> bool:
        """True iff the edge is exactly i -> j."""
        return self.mark(j, i) == TAIL and self.mark(i, j) == ARROW

    def parents(self, j: int) -> set[int]:
        return {i for i in self._adj[j] if self.is_directed_edge(i, j)}

    def children(self, i: int) -> set[int]:
        return {j for j in self._adj[i] if self.is_directed_edge(i, j)}

    # -- mutation ----------------------------------------------------------

    def _touch(self) -> None:
        self._version += 1
        self._csr_cache = None
        self._kernel_cache = None
        self._ancestral_cache = None

    def set_edge(self, i: int, j: int, mark_at_i: int, mark_at_j: int) -> None:
        self.check_node(i)
        self.check_node(j)
        if i == j:
            raise GraphError(f"self loop at node {i}")
        if self._dense:
            self._marks[i, j] = mark_at_j
            self._marks[j, i] = mark_at_i
        else:
            self._marks[i][j] = mark_at_j
            self._marks[j][i] = mark_at_i
        self._adj[i].add(j)
        self._adj[j].add(i)
        self._touch()

    def add_directed_edge(self, i: int, j: int) -> None:
        self.set_edge(i, j, TAIL, ARROW)

    def set_mark(self, i: int, j: int, mark_at_j: int) -> None:
        """Overwrite the mark at the j end of the existing edge (i, j)."""
        if not self.has_edge(i, j):
            raise GraphError(f"no edge ({i}, {j})")
        if self._dense:
            self._marks[i, j] = mark_at_j
        else:
            self._marks[i][j] = mark_at_j
        self._touch()

    def remove_edge(self, i: int, j: int) -> None:
        if not self.has_edge(i, j):
            raise GraphError(f"no edge ({i}, {j})")
        if self._dense:
            self._marks[i, j] = 0
            self._marks[j, i] = 0
        else:
            del self._marks[i][j]
            del self._marks[j][i]
        self._adj[i].discard(j)
        self._adj[j].discard(i)
        self._touch()

    def copy(self) -> "MixedGraph":
        g = MixedGraph(self.p, self.names)
        for i, j, mi, mj in self.edges():
            g.set_edge(i, j, mi, mj)
        return g

    def induced(self, nodes) -> "MixedGraph":
        """Same-universe copy keeping only edges with both ends in ``nodes``."""
        keep = set(nodes)
        g = MixedGraph(self.p, self.names)
        for i, j, mi, mj in self.edges():
            if i in keep and j in keep:
                g.set_edge(i, j, mi, mj)
        return g

    # -- structure tests ---------------------------------------------------

    def skeleton_edges(self) -> set[tuple[int, int]]:
        return {(i, j) for i, j, _, _ in self.edges()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self.p == other.p and list(self.edges()) == list(other.edges())

    def __hash__(self):
        raise TypeError("MixedGraph is mutable and unhashable")

    def __repr__(self) -> str:
        return f"MixedGraph(p={self.p}, edges={self.edge_count()})"

    def format_edges(self) -> str:
        """Human-readable edge list, one per line."""
        glyph = {
            (TAIL, ARROW): "->",
            (ARROW, TAIL): "<-",
            (ARROW, ARROW): "<->",
            (TAIL, TAIL): "--",
            (CIRCLE, CIRCLE): "o-o",
            (CIRCLE, ARROW): "o->",
            (ARROW, CIRCLE): "<-o",
            (TAIL, CIRCLE): "-o",
            (CIRCLE, TAIL): "o-",
        }
        def label(i):
            return self.names[i] if self.names else str(i)
        return "\n".join(
            f"{label(i)} {glyph[(mi, mj)]} {label(j)}" for i, j, mi, mj in self.edges()
        )

    # -- I/O ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        doc = {"p": self.p}
        if self.names is not None:
            doc["names"] = list(self.names)
        doc["edges"] = [
            [i, j, _MARK_TO_STR[mi], _MARK_TO_STR[mj]] for i, j, mi, mj in self.edges()
        ]
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "MixedGraph":
        g = cls(int(doc["p"]), doc.get("names"))
        for i, j, mi, mj in doc["edges"]:
            if g.has_edge(i, j):
                raise GraphError(f"duplicate edge ({i}, {j})")
            g.set_edge(int(i), int(j), _STR_TO_MARK[mi], _STR_TO_MARK[mj])
        return g

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "MixedGraph":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))

    # -- kernel interface ----------------------------------------------------

    def csr(self):
        """Flattened half-edge arrays for the separation kernels.

        Returns (indptr, nbr, mark_self, mark_other): slot k in node u's range
        represents the half edge u-nbr[k] with mark_self[k] at u's end and
        mark_other[k] at the neighbour's end.
        """
        if self._csr_cache is None:
            import numpy as np

            indptr = np.zeros(self.p + 1, dtype=np.int32)
            total = sum(len(a) for a in self._adj)
            nbr = np.zeros(total, dtype=np.int32)
            mark_self = np.zeros(total, dtype=np.int8)
            mark_other = np.zeros(total, dtype=np.int8)
            k = 0
            for u in range(self.p):
                for v in sorted(self._adj[u]):
                    nbr[k] = v
                    mark_self[k] = self.mark(v, u)
                    mark_other[k] = self.mark(u, v)
                    k += 1
                indptr[u + 1] = k
            self._csr_cache = (indptr, nbr, mark_self, mark_other)
        return self._csr_cache


class Dag(MixedGraph):
    """MixedGraph restricted to directed edges and free of directed cycles."""

    def set_edge(self, i: int, j: int, mark_at_i: int, mark_at_j: int) -> None:
        if (mark_at_i, mark_at_j) not in ((TAIL, ARROW), (ARROW, TAIL)):
            raise GraphError("a DAG edge must be tail->arrow")
        super().set_edge(i, j, mark_at_i, mark_at_j)

    def validate_acyclic(self) -> None:
        self.topological_order()

    def topological_order(self) -> list[int]:
        """Kahn's algorithm; lowest index first among ready nodes."""
        indeg = [0] * self.p
        for i, j, mi, mj in self.edges():
            indeg[j if mj == ARROW else i] += 1
        import heapq

        ready = [i for i in range(self.p) if indeg[i] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v in self.children(u):
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        if len(order) != self.p:
            raise CyclicInputError("directed cycle detected")
        return order

    @classmethod
    def from_edges(
        cls, p: int, edges: Sequence[tuple[int, int]], names: Optional[Sequence[str]] = None
    ) -> "Dag":
        g = cls(p, names)
        for i, j in edges:
            if g.has_edge(i, j):
                if g.is_directed_edge(j, i):
                    raise CyclicInputError(f"two-cycle between {i} and {j}")
                raise GraphError(f"duplicate edge ({i}, {j})")
            g.add_directed_edge(i, j)
        g.validate_acyclic()
        return g

    def copy(self) -> "Dag":
        g = Dag(self.p, self.names)
        for i, j, mi, mj in self.edges():
            g.set_edge(i, j, mi, mj)
        return g


def validate_targets(p: int, targets) -> tuple[int, ...]:
    """Normalize a target node collection to a sorted tuple, validating it."""
    ts = tuple(sorted(set(int(t) for t in targets)))
    if not ts:
        raise GraphError("target set must be non-empty")
    if len(ts) != len(tuple(targets)):
        raise GraphError("target nodes must be distinct")
    for t in ts:
        if not 0 <= t < p:
            raise GraphError(f"target {t} out of range for p={p}")
    return ts


def complete_circle_graph(p: int, nodes) -> MixedGraph:
    """Circle-circle complete graph over ``nodes`` inside universe ``p``."""
    g = MixedGraph(p)
    for i, j in combinations(sorted(nodes), 2):
        g.set_edge(i, j, CIRCLE, CIRCLE)
    return g
