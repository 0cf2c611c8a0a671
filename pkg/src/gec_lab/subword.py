"""Byte-pair encoding: learning merges, segmenting and restoring words.

Words are learned as plain character sequences, so merges never cross word
boundaries. Segmented output marks every non-final piece of a word with a
continuation suffix (``@@`` by default): ``lowest -> low@@ est``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from gec_lab.errors import ValidationError

DEFAULT_MARKER = "@@"

Pair = tuple[str, str]


@dataclass
class BpeModel:
    merges: list[Pair] = field(default_factory=list)
    marker: str = DEFAULT_MARKER

    def __post_init__(self):
        self.merges = [tuple(p) for p in self.merges]
        if len(set(self.merges)) != len(self.merges):
            raise ValidationError("duplicate merge in BPE model")
        self._ranks = {p: k for k, p in enumerate(self.merges)}
        self._cache: dict[str, tuple[str, ...]] = {}

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for left, right in self.merges:
                fh.write(f"{left} {right}\n")

    @classmethod
    def load(cls, path: str | Path, marker: str = DEFAULT_MARKER) -> "BpeModel":
        merges = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                parts = line.rstrip("\r\n").split(" ")
                if len(parts) != 2 or not all(parts):
                    raise ValidationError(f"{path}:{lineno}: expected 'left right'")
                merges.append((parts[0], parts[1]))
        return cls(merges, marker)

    def segment(self, word: str) -> tuple[str, ...]:
        """Pieces of one word; the replay is greedy by merge rank."""
        if word in self._cache:
            return self._cache[word]
        symbols = list(word)
        ranks = self._ranks
        while len(symbols) > 1:
            best = None
            best_rank = len(ranks)
            for k in range(len(symbols) - 1):
                r = ranks.get((symbols[k], symbols[k + 1]), best_rank)
                if r < best_rank:
                    best, best_rank = k, r
            if best is None:
                break
            pair = (symbols[best], symbols[best + 1])
            merged = []
            k = 0
            while k < len(symbols):
                if k < len(symbols) - 1 and (symbols[k], symbols[k + 1]) == pair:
                    merged.append(symbols[k] + symbols[k + 1])
                    k += 2
                else:
                    merged.append(symbols[k])
                    k += 1
            symbols = merged
        out = tuple(symbols)
        self._cache[word] = out
        return out


def _pair_counts(vocab: Mapping[tuple[str, ...], int]) -> Counter:
    counts: Counter = Counter()
    for symbols, freq in vocab.items():
        for a, b in zip(symbols, symbols[1:]):
            counts[(a, b)] += freq
    return counts


def _merge_word(symbols: tuple[str, ...], pair: Pair) -> tuple[str, ...]:
    out = []
    k = 0
    while k < len(symbols):
        if k < len(symbols) - 1 and symbols[k] == pair[0] and symbols[k + 1] == pair[1]:
            out.append(pair[0] + pair[1])
            k += 2
        else:
            out.append(symbols[k])
            k += 1
    return tuple(out)


def bpe_learn(frequencies: Mapping[str, int], num_merges: int, marker: str = DEFAULT_MARKER) -> BpeModel:
    """Learn up to ``num_merges`` merges from a word frequency table.

    Each step merges the most frequent adjacent pair, ties going to the
    lexicographically smallest pair. Learning stops early once no pair
    occurs at least twice.
    """
    if num_merges < 0:
        raise ValidationError("num_merges must be >= 0")
    vocab: dict[tuple[str, ...], int] = {}
    for word, freq in frequencies.items():
        if word and freq > 0:
            key = tuple(word)
            vocab[key] = vocab.get(key, 0) + freq
    merges: list[Pair] = []
    counts = _pair_counts(vocab)
    while len(merges) < num_merges and counts:
        pair, freq = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if freq < 2:
            break
        merges.append(pair)
        new_vocab: dict[tuple[str, ...], int] = {}
        for symbols, f in vocab.items():
            if pair[0] in symbols:
                merged = _merge_word(symbols, pair)
                if merged != symbols:
                    for a, b in zip(symbols, symbols[1:]):
                        counts[(a, b)] -= f
                    for a, b in zip(merged, merged[1:]):
                        counts[(a, b)] += f
                    symbols = merged
            new_vocab[symbols] = new_vocab.get(symbols, 0) + f
        vocab = new_vocab
        counts = +counts
    return BpeModel(merges, marker)


def count_words(sentences: Iterable[Sequence[str]]) -> Counter:
    counts: Counter = Counter()
    for tokens in sentences:
        counts.update(tokens)
    return counts


def bpe_apply(model: BpeModel, tokens: Sequence[str]) -> list[str]:
    """Segment a sentence; tokens must not already end with the marker."""
    out: list[str] = []
    for token in tokens:
        if token.endswith(model.marker):
            raise ValidationError(
                f"token {token!r} ends with the continuation marker {model.marker!r} and cannot be restored")
        pieces = model.segment(token) or ("",)
        out.extend(p + model.marker for p in pieces[:-1])
        out.append(pieces[-1])
    return out


def bpe_restore(subwords: Sequence[str], marker: str = DEFAULT_MARKER) -> list[str]:
    out: list[str] = []
    pending = ""
    for piece in subwords:
        if piece.endswith(marker):
            pending += piece[:-len(marker)]
        else:
            out.append(pending + piece)
            pending = ""
    if pending or (subwords and subwords[-1].endswith(marker)):
        raise ValidationError("dangling continuation marker at end of sentence")
    return out
