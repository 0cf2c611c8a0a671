"""Token alignment between a source sentence and a corrected version.

The aligner is a weighted Damerau-Levenshtein (optimal string alignment)
search. Costs, in units of one full edit:

    match                      0
    substitution               1   (0.5 when the tokens differ only in case)
    insertion / deletion       1
    adjacent transposition     1

Maximal runs of non-match operations are merged into span edits, which is
roughly what ERRANT's "all-split then merge" pass does without POS tags.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from gec_lab.errors import ValidationError

Tokens = Sequence[str]

# costs are stored doubled so that the case-only discount stays integral
_FULL = 2
_CASE = 1

MATCH, TRANSPOSE, SUBSTITUTE, DELETE, INSERT = "M", "T", "S", "D", "I"


@dataclass(frozen=True, order=True)
class Edit:
    """Replace ``source[start:end]`` with ``replacement``.

    ``start == end`` is an insertion before token ``start``; an empty
    replacement is a deletion.
    """

    start: int
    end: int
    replacement: tuple[str, ...] = ()
    type_label: str = "UNK"

    def __post_init__(self):
        if not isinstance(self.replacement, tuple):
            object.__setattr__(self, "replacement", tuple(self.replacement))
        if self.start < 0 or self.end < self.start:
            raise ValidationError(f"invalid edit span [{self.start}, {self.end})")
        if self.start == self.end and not self.replacement:
            raise ValidationError(f"empty edit at {self.start}: insertion with nothing to insert")

    @property
    def key(self) -> tuple[int, int, tuple[str, ...]]:
        """Identity used for matching; ignores the type label."""
        return (self.start, self.end, self.replacement)

    @property
    def is_insertion(self) -> bool:
        return self.start == self.end

    @property
    def is_deletion(self) -> bool:
        return not self.replacement


class AlignOp(NamedTuple):
    kind: str
    src_start: int
    src_end: int
    hyp_start: int
    hyp_end: int


def _sub_cost(a: str, b: str) -> int:
    if a == b:
        return 0
    if a.casefold() == b.casefold():
        return _CASE
    return _FULL


def _cost_table(source: Tokens, hypothesis: Tokens) -> list[list[int]]:
    n, m = len(source), len(hypothesis)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        table[i][0] = i * _FULL
    for j in range(1, m + 1):
        table[0][j] = j * _FULL
    for i in range(1, n + 1):
        s = source[i - 1]
        row, up = table[i], table[i - 1]
        for j in range(1, m + 1):
            h = hypothesis[j - 1]
            best = up[j - 1] + _sub_cost(s, h)
            if up[j] + _FULL < best:
                best = up[j] + _FULL
            if row[j - 1] + _FULL < best:
                best = row[j - 1] + _FULL
            if (i > 1 and j > 1 and s != h and s == hypothesis[j - 2]
                    and source[i - 2] == h):
                t = table[i - 2][j - 2] + _FULL
                if t < best:
                    best = t
            row[j] = best
    return table


def align(source: Tokens, hypothesis: Tokens) -> list[AlignOp]:
    """Minimum-cost operation sequence turning ``source`` into ``hypothesis``.

    Equal-cost ties are resolved on the backtrace by preferring match, then
    transposition, substitution, deletion and insertion.
    """
    table = _cost_table(source, hypothesis)
    ops: list[AlignOp] = []
    i, j = len(source), len(hypothesis)
    while i > 0 or j > 0:
        here = table[i][j]
        if i > 0 and j > 0:
            s, h = source[i - 1], hypothesis[j - 1]
            if s == h and table[i - 1][j - 1] == here:
                ops.append(AlignOp(MATCH, i - 1, i, j - 1, j))
                i, j = i - 1, j - 1
                continue
            if (i > 1 and j > 1 and s != h and s == hypothesis[j - 2]
                    and source[i - 2] == h and table[i - 2][j - 2] + _FULL == here):
                ops.append(AlignOp(TRANSPOSE, i - 2, i, j - 2, j))
                i, j = i - 2, j - 2
                continue
            if s != h and table[i - 1][j - 1] + _sub_cost(s, h) == here:
                ops.append(AlignOp(SUBSTITUTE, i - 1, i, j - 1, j))
                i, j = i - 1, j - 1
                continue
        if i > 0 and table[i - 1][j] + _FULL == here:
            ops.append(AlignOp(DELETE, i - 1, i, j, j))
            i -= 1
            continue
        ops.append(AlignOp(INSERT, i, i, j - 1, j))
        j -= 1
    ops.reverse()
    return ops


def alignment_cost(source: Tokens, hypothesis: Tokens) -> float:
    """Cost of the optimal alignment, in edit units."""
    return _cost_table(source, hypothesis)[len(source)][len(hypothesis)] / _FULL


def extract_edits(source: Tokens, hypothesis: Tokens) -> list[Edit]:
    edits = []
    run_start = prev = None
    for op in align(source, hypothesis):
        if op.kind == MATCH:
            if run_start is not None:
                edits.append(_close_run(run_start, prev, hypothesis))
                run_start = None
            continue
        if run_start is None:
            run_start = op
        prev = op
    if run_start is not None:
        edits.append(_close_run(run_start, prev, hypothesis))
    return edits


def _close_run(first: AlignOp, last: AlignOp, hypothesis: Tokens) -> Edit:
    return Edit(first.src_start, last.src_end,
                tuple(hypothesis[first.hyp_start:last.hyp_end]))


def check_edits(edits: Sequence[Edit], length: int) -> None:
    """Raise ValidationError unless ``edits`` are sorted, disjoint and in range."""
    prev_end = 0
    prev_insert_at = -1
    for k, e in enumerate(edits):
        if e.end > length:
            raise ValidationError(f"edit {k} span [{e.start}, {e.end}) exceeds sentence length {length}")
        if e.start < prev_end:
            raise ValidationError(f"edit {k} overlaps or precedes the previous edit")
        if e.is_insertion and e.start == prev_insert_at:
            raise ValidationError(f"edit {k} is a second insertion at offset {e.start}")
        if e.is_insertion:
            prev_insert_at = e.start
        prev_end = e.end


def apply_edits(source: Tokens, edits: Sequence[Edit]) -> list[str]:
    check_edits(edits, len(source))
    out: list[str] = []
    pos = 0
    for e in edits:
        out.extend(source[pos:e.start])
        out.extend(e.replacement)
        pos = e.end
    out.extend(source[pos:])
    return out
