"""Markov-blanket and second-order neighbor estimation.

First-order neighbors are recovered by a forward-backward parent-child
search with a max-p-value dependence score, a symmetry cross-check (v keeps
its place in pc(t) only if t earns one in pc(v)), and a collider-based
spouse test. The cross-check is what pins the oracle fixed point
pc(t) = parents union children: without it, a grandchild reachable only
through a conditioned child can survive the backward sweep.

Scans run in ascending node order everywhere; candidate conditioning sets
enumerate by size then lexicographically. Output is deterministic given the
tester, alpha, and lmax.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .ci import CiTester
from .graphs import validate_targets
from .sepsets import SepsetMap


@dataclass(frozen=True)
class MbConfig:
    alpha: float = 0.01
    lmax: Optional[int] = 3
    # Members of a target neighborhood get the same full blanket treatment
    # as targets when True. The pipeline only needs their parent-child sets
    # (supersets are harmless for separator pools), and skipping the spouse
    # and symmetry stages for them keeps the CI-test budget linear in the
    # neighborhood size rather than pulling in second-order sweeps.
    member_full: bool = False


def _subsets(pool: list[int], max_size: Optional[int]):
    """All subsets of ``pool`` by ascending size, lexicographic within size."""
    hi = len(pool) if max_size is None else min(max_size, len(pool))
    for size in range(hi + 1):
        yield from combinations(pool, size)


class _MbSearch:
    """Shared state for one neighbor-set construction run."""

    def __init__(self, tester: CiTester, alpha: float, lmax: Optional[int], p: int):
        self.tester = tester
        self.alpha = alpha
        self.lmax = lmax
        self.p = p
        self.sepsets = SepsetMap()
        self._pc_cache: dict[int, tuple[int, ...]] = {}

    # -- forward-backward parent-child sweep -------------------------------

    def pc_raw(self, t: int) -> tuple[int, ...]:
        """Forward-backward set for t, before the symmetry cross-check."""
        if t in self._pc_cache:
            return self._pc_cache[t]
        alpha, lmax = self.alpha, self.lmax
        alive = [v for v in range(self.p) if v != t]
        max_p: dict[int, float] = {v: 0.0 for v in alive}
        pc: list[int] = []
        pending = [()]  # conditioning sets not yet tried on the survivors
        while alive:
            kept = []
            for v in alive:
                separated = False
                for s in pending:
                    if v in s:
                        continue
                    d = self.tester.test(t, v, s, alpha)
                    if d.independent:
                        self.sepsets.record(t, v, s)
                        separated = True
                        break
                    if d.p_value > max_p[v]:
                        max_p[v] = d.p_value
                if not separated:
                    kept.append(v)
            alive = kept
            if not alive:
                break
            best = min(alive, key=lambda v: (max_p[v], v))
            pc.append(best)
            alive.remove(best)
            pending = self._sets_with_newest(pc, best)
        pc = self._backward(t, sorted(pc))
        self._pc_cache[t] = pc
        return pc

    def _sets_with_newest(self, pc: list[int], newest: int) -> list[tuple[int, ...]]:
        others = sorted(v for v in pc if v != newest)
        hi = len(others) if self.lmax is None else min(self.lmax - 1, len(others))
        out = []
        for size in range(hi + 1):
            for rest in combinations(others, size):
                out.append(tuple(sorted(rest + (newest,))))
        out.sort(key=lambda s: (len(s), s))
        return out

    def _backward(self, t: int, pc: list[int]) -> tuple[int, ...]:
        kept = list(pc)
        for v in list(kept):
            rest = sorted(u for u in kept if u != v)
            for s in _subsets(rest, self.lmax):
                d = self.tester.test(t, v, s, self.alpha)
                if d.independent:
                    self.sepsets.record(t, v, s)
                    kept.remove(v)
                    break
        return tuple(kept)

    # -- public pieces ------------------------------------------------------

    def pc_symmetric(self, t: int) -> tuple[int, ...]:
        return tuple(v for v in self.pc_raw(t) if t in self.pc_raw(v))

    def spouses(self, t: int, pc: Iterable[int]) -> tuple[int, ...]:
        pc = tuple(sorted(pc))
        found: set[int] = set()
        for c in pc:
            for s in sorted(set(self.pc_raw(c)) - set(pc) - {t}):
                if s in found:
                    continue
                sep = self.sepsets.find(t, s)
                if sep is None:
                    sep = self._search_sepset(t, s, pc)
                    if sep is None:
                        continue
                d = self.tester.test(t, s, tuple(sorted(set(sep) | {c})), self.alpha)
                if not d.independent:
                    found.add(s)
        return tuple(sorted(found))

    def _search_sepset(self, t: int, s: int, pool) -> Optional[tuple[int, ...]]:
        for cand in _subsets(sorted(set(pool) - {s}), self.lmax):
            d = self.tester.test(t, s, cand, self.alpha)
            if d.independent:
                self.sepsets.record(t, s, cand)
                return self.sepsets.get(t, s)
        return None

    def blanket(self, t: int) -> tuple[int, ...]:
        pc = self.pc_symmetric(t)
        return tuple(sorted(set(pc) | set(self.spouses(t, pc))))


def estimate_parents_children(
    t: int, tester: CiTester, alpha: float, lmax: Optional[int], p: Optional[int] = None
) -> set[int]:
    """Estimated parent-child set of t (symmetry-checked)."""
    search = _MbSearch(tester, alpha, lmax, p if p is not None else _tester_p(tester))
    return set(search.pc_symmetric(t))


def estimate_spouses(
    t: int,
    pc: Iterable[int],
    tester: CiTester,
    alpha: float,
    lmax: Optional[int],
    p: Optional[int] = None,
    sepsets: Optional[SepsetMap] = None,
) -> set[int]:
    """Spouse candidates are parent-child members of t's own parent-child
    nodes; a candidate s is a spouse when conditioning a separating set of
    (t, s) on the shared neighbor c turns the pair dependent."""
    search = _MbSearch(tester, alpha, lmax, p if p is not None else _tester_p(tester))
    if sepsets is not None:
        search.sepsets.merge_missing(sepsets)
    return set(search.spouses(t, tuple(sorted(pc))))


def _tester_p(tester: CiTester) -> int:
    if hasattr(tester, "dag"):
        return tester.dag.p
    if hasattr(tester, "cov"):
        return tester.cov.p
    raise TypeError("cannot infer node count from tester; pass p explicitly")


@dataclass(frozen=True)
class NeighborSets:
    """First- and second-order neighbor structure around the targets."""

    targets: tuple[int, ...]
    n1: dict[int, frozenset[int]]  # per target and per neighborhood member
    n2: dict[int, frozenset[int]]  # per target

    def nb(self, t: int) -> frozenset[int]:
        return self.n1[t] | {t}

    @property
    def union(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for t in self.targets:
            out |= self.nb(t)
        return out

    @property
    def union_with_second_order(self) -> frozenset[int]:
        out = self.union
        for t in self.targets:
            out |= self.n2[t]
        return out

    def same_neighborhood(self, i: int, j: int) -> bool:
        return any(i in self.nb(t) and j in self.nb(t) for t in self.targets)

    def to_json_dict(self) -> dict:
        return {
            "targets": list(self.targets),
            "n1": {str(k): sorted(v) for k, v in self.n1.items()},
            "n2": {str(k): sorted(v) for k, v in self.n2.items()},
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "NeighborSets":
        return cls(
            targets=tuple(doc["targets"]),
            n1={int(k): frozenset(v) for k, v in doc["n1"].items()},
            n2={int(k): frozenset(v) for k, v in doc["n2"].items()},
        )


def build_neighbor_sets(
    targets,
    tester: CiTester,
    cfg: MbConfig,
    p: Optional[int] = None,
    return_sepsets: bool = False,
):
    """Estimate N1 for each target and each neighborhood member, then the
    per-target second-order sets.

    Targets get the full treatment (symmetry check plus spouses) since their
    blankets define the output node set. Members default to their raw
    parent-child sets, which is all the separator searches downstream need;
    set ``cfg.member_full`` for the symmetric variant.
    """
    p = p if p is not None else _tester_p(tester)
    targets = validate_targets(p, targets)
    search = _MbSearch(tester, cfg.alpha, cfg.lmax, p)
    n1: dict[int, frozenset[int]] = {}
    for t in targets:
        n1[t] = frozenset(search.blanket(t))
    members = sorted(set().union(*(n1[t] for t in targets)) - set(targets))
    for v in members:
        if cfg.member_full:
            n1[v] = frozenset(search.blanket(v))
        else:
            n1[v] = frozenset(search.pc_raw(v))
    n2: dict[int, frozenset[int]] = {}
    for t in targets:
        nb_t = n1[t] | {t}
        acc: set[int] = set()
        for j in sorted(n1[t]):
            acc |= n1[j]
        n2[t] = frozenset(acc - nb_t)
    nbs = NeighborSets(targets=targets, n1=n1, n2=n2)
    if return_sepsets:
        return nbs, search.sepsets
    return nbs
