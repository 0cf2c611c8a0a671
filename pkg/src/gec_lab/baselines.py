"""Model-free correctors used to drive the scoring pipeline end to end."""
from __future__ import annotations

from typing import Iterable, Sequence

from gec_lab.distance import NeighborIndex
from gec_lab.errors import ValidationError


def identity_correct(source: Sequence[str]) -> list[str]:
    return list(source)


class SpellCorrector:
    """Replace out-of-vocabulary tokens that have exactly one close vocabulary word.

    Membership is checked case-insensitively; ambiguous or candidate-free
    tokens are left alone.
    """

    def __init__(self, vocabulary: Iterable[str], max_distance: int = 1):
        if max_distance < 1:
            raise ValidationError("max_distance must be >= 1")
        self.vocabulary = frozenset(vocabulary)
        self._folded = frozenset(w.casefold() for w in self.vocabulary)
        self._index = NeighborIndex(self.vocabulary, max_distance)
        self._memo: dict[str, str] = {}

    def correct_token(self, token: str) -> str:
        if token in self.vocabulary or token.casefold() in self._folded:
            return token
        if token not in self._memo:
            found = self._index.neighbors(token)
            self._memo[token] = found[0][1] if len(found) == 1 else token
        return self._memo[token]

    def __call__(self, source: Sequence[str]) -> list[str]:
        return [self.correct_token(t) for t in source]


def spell_correct(source: Sequence[str], vocabulary: Iterable[str], max_distance: int = 1) -> list[str]:
    return SpellCorrector(vocabulary, max_distance)(source)
