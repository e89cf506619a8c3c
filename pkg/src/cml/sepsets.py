"""Separating-set records keyed by unordered node pair (first set found)."""

from __future__ import annotations

from typing import Iterator, Optional


class SepsetMap:
    def __init__(self):
        self._map: dict[tuple[int, int], tuple[int, ...]] = {}

    @staticmethod
    def _key(i: int, j: int) -> tuple[int, int]:
        return (i, j) if i < j else (j, i)

    def record(self, i: int, j: int, s) -> None:
        """Store the first separating set found for the pair; later finds
        are ignored."""
        key = self._key(i, j)
        if key not in self._map:
            self._map[key] = tuple(sorted(int(v) for v in s))

    def contains(self, i: int, j: int) -> bool:
        return self._key(i, j) in self._map

    def get(self, i: int, j: int) -> tuple[int, ...]:
        return self._map[self._key(i, j)]

    def find(self, i: int, j: int) -> Optional[tuple[int, ...]]:
        return self._map.get(self._key(i, j))

    def items(self) -> Iterator[tuple[tuple[int, int], tuple[int, ...]]]:
        return iter(sorted(self._map.items()))

    def __len__(self) -> int:
        return len(self._map)

    def merge_missing(self, other: "SepsetMap") -> None:
        """Adopt pairs from ``other`` that this map has not seen."""
        for (i, j), s in other.items():
            self.record(i, j, s)

    def to_json_list(self) -> list:
        return [[i, j, list(s)] for (i, j), s in self.items()]

    @classmethod
    def from_json_list(cls, rows) -> "SepsetMap":
        out = cls()
        for i, j, s in rows:
            out.record(int(i), int(j), s)
        return out
