"""Character-level edit distance and fast neighbourhood lookup."""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable


def levenshtein(a: str, b: str, limit: int | None = None) -> int:
    """Unit-cost Levenshtein distance between two strings.

    With ``limit`` set, returns ``limit + 1`` as soon as the distance is known
    to exceed it.
    """
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if limit is not None and len(a) - len(b) > limit:
        return limit + 1
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        best = i
        for j, cb in enumerate(b, 1):
            v = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
            cur.append(v)
            if v < best:
                best = v
        if limit is not None and best > limit:
            return limit + 1
        prev = cur
    return prev[-1]


def _deletions(word: str, depth: int) -> set[str]:
    out = {word}
    frontier = {word}
    for _ in range(depth):
        nxt = set()
        for w in frontier:
            for i in range(len(w)):
                nxt.add(w[:i] + w[i + 1:])
        nxt -= out
        out |= nxt
        frontier = nxt
    return out


class NeighborIndex:
    """Finds vocabulary words within a Levenshtein radius of a query.

    Two strings within distance ``d`` always share a string reachable from
    each by at most ``d`` deletions, so candidates come from a deletion index
    and are then verified exactly.
    """

    def __init__(self, words: Iterable[str], max_distance: int):
        if max_distance < 1:
            raise ValueError("max_distance must be >= 1")
        self.max_distance = max_distance
        self.words = frozenset(words)
        self._index: dict[str, list[str]] = defaultdict(list)
        for w in sorted(self.words):
            for d in _deletions(w, max_distance):
                self._index[d].append(w)

    def neighbors(self, query: str, include_self: bool = False) -> list[tuple[int, str]]:
        """``(distance, word)`` pairs sorted by distance, then word."""
        seen: set[str] = set()
        found = []
        for d in _deletions(query, self.max_distance):
            for w in self._index.get(d, ()):
                if w in seen:
                    continue
                seen.add(w)
                if w == query and not include_self:
                    continue
                dist = levenshtein(query, w, self.max_distance)
                if dist <= self.max_distance:
                    found.append((dist, w))
        found.sort()
        return found
