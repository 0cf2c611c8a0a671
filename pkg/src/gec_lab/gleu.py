"""GLEU for fluency evaluation, with GLEU+ style reference sampling.

Per n-gram order the sentence numerator is

    sum_g min(h_g, r_g) - sum_g max(0, min(h_g, s_g) - r_g)

floored at zero, where ``h``, ``r`` and ``s`` are hypothesis, reference and
source n-gram counts. The second sum charges the hypothesis for source
n-grams it kept that the reference dropped.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gec_lab.errors import ValidationError
from gec_lab.rng import stream

Tokens = Sequence[str]

DEFAULT_ORDER = 4
DEFAULT_ITERATIONS = 500


@dataclass(frozen=True)
class GleuStats:
    hyp_length: int
    ref_length: int
    numerators: tuple[int, ...]
    denominators: tuple[int, ...]

    def as_row(self) -> list[int]:
        row = [self.hyp_length, self.ref_length]
        for num, den in zip(self.numerators, self.denominators):
            row += [num, den]
        return row


def ngram_counts(tokens: Tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def gleu_stats(source: Tokens, hypothesis: Tokens, reference: Tokens,
               n_max: int = DEFAULT_ORDER) -> GleuStats:
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    return _stats_against(_SentenceCounts(source, hypothesis, n_max), reference)


class _SentenceCounts:
    """Hypothesis and source n-gram counts, shared by every reference of a sentence."""

    __slots__ = ("hyp_len", "n_max", "hyp", "src")

    def __init__(self, source: Tokens, hypothesis: Tokens, n_max: int):
        self.hyp_len = len(hypothesis)
        self.n_max = n_max
        self.hyp = [ngram_counts(hypothesis, n) for n in range(1, n_max + 1)]
        self.src = [ngram_counts(source, n) for n in range(1, n_max + 1)]


def _stats_against(counts: _SentenceCounts, reference: Tokens) -> GleuStats:
    nums, dens = [], []
    for n, (h, s) in enumerate(zip(counts.hyp, counts.src), 1):
        r = ngram_counts(reference, n)
        total = 0
        for g, c in h.items():
            rc = r.get(g, 0)
            total += min(c, rc)
            sc = s.get(g, 0)
            if sc:
                total -= max(0, min(c, sc) - rc)
        nums.append(max(0, total))
        dens.append(max(0, counts.hyp_len - n + 1))
    return GleuStats(counts.hyp_len, len(reference), tuple(nums), tuple(dens))


def gleu_from_totals(row: Sequence[float], n_max: int = DEFAULT_ORDER) -> float:
    """Corpus GLEU from summed ``[hyp_len, ref_len, num_1, den_1, ...]``."""
    hyp_len, ref_len = row[0], row[1]
    nums, dens = row[2::2], row[3::2]
    if hyp_len == 0 or any(x == 0 for x in nums) or any(y == 0 for y in dens):
        return 0.0
    log_prec = sum(math.log(x / y) for x, y in zip(nums, dens)) / n_max
    brevity = min(0.0, 1.0 - ref_len / hyp_len)
    return math.exp(brevity + log_prec)


def gleu_corpus(sources: Sequence[Tokens], hypotheses: Sequence[Tokens],
                reference_sets: Sequence[Sequence[Tokens]], n_max: int = DEFAULT_ORDER,
                iterations: int = DEFAULT_ITERATIONS, seed: int = 0) -> float:
    """Mean corpus GLEU over ``iterations`` random draws of one reference per sentence.

    Iteration ``t`` draws from ``stream(seed, "gleu", t)``; sentence ``i`` with
    ``k > 1`` references takes index ``floor(u * k)`` for the next uniform
    ``u``, in corpus order. Single-reference sentences consume no draws.
    """
    if not hypotheses:
        raise ValidationError("cannot score an empty corpus")
    if not len(sources) == len(hypotheses) == len(reference_sets):
        raise ValidationError(
            f"length mismatch: {len(sources)} sources, {len(hypotheses)} hypotheses, "
            f"{len(reference_sets)} reference sets")
    if iterations < 1:
        raise ValidationError("iterations must be >= 1")
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    width = 2 + 2 * n_max
    fixed = np.zeros(width, dtype=np.int64)
    multi_rows: list[np.ndarray] = []
    multi_sizes: list[int] = []
    for i, (src, hyp, refs) in enumerate(zip(sources, hypotheses, reference_sets)):
        if not refs:
            raise ValidationError(f"sentence {i} has no references")
        shared = _SentenceCounts(src, hyp, n_max)
        rows = [_stats_against(shared, ref).as_row() for ref in refs]
        if len(rows) == 1:
            fixed += np.asarray(rows[0], dtype=np.int64)
        else:
            multi_rows.append(np.asarray(rows, dtype=np.int64))
            multi_sizes.append(len(rows))
    if not multi_rows:
        return gleu_from_totals(fixed.tolist(), n_max)

    max_refs = max(multi_sizes)
    table = np.zeros((len(multi_rows), max_refs, width), dtype=np.int64)
    for k, rows in enumerate(multi_rows):
        table[k, :len(rows)] = rows
    sizes = np.asarray(multi_sizes, dtype=np.float64)
    sentence_idx = np.arange(len(multi_rows))
    total = 0.0
    for t in range(iterations):
        rng = stream(seed, "gleu", t)
        picks = (rng.random_array(len(sizes)) * sizes).astype(np.int64)
        summed = fixed + table[sentence_idx, picks].sum(axis=0)
        total += gleu_from_totals(summed.tolist(), n_max)
    return total / iterations
