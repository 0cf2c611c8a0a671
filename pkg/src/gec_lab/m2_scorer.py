"""MaxMatch (M2) scoring.

For every sentence the scorer builds a lattice over alignment states
``(i, j)`` (``i`` source tokens and ``j`` hypothesis tokens consumed). Base
arcs are the match / substitution / insertion / deletion steps that lie on
some minimum unit-cost Levenshtein path. Transitive arcs join any run of base
arcs containing at least one change and at most ``max_unchanged`` matches
into a single span edit. The chosen edit sequence is the lattice path with
the most edits exactly equal to a gold edit, then the fewest edits overall.

Corpus scoring follows the reference scorer's multi-annotator protocol: per
sentence, the annotator whose counts give the best cumulative F-beta so far
is kept (first annotator on ties).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gec_lab.alignment import Edit, check_edits
from gec_lab.corpus_io import GoldAnnotation
from gec_lab.errors import ValidationError

Tokens = Sequence[str]
EditKey = tuple[int, int, tuple[str, ...]]

DEFAULT_BETA = 0.5
DEFAULT_MAX_UNCHANGED = 2


def f_beta(p: float, r: float, beta: float = DEFAULT_BETA) -> float:
    if p == 0 and r == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * p * r / (b2 * p + r)


def precision_recall_f(tp: int, fp: int, fn: int, beta: float = DEFAULT_BETA) -> tuple[float, float, float]:
    """P, R, F-beta from counts; 0/0 precision or recall counts as 1.0."""
    p = tp / (tp + fp) if tp + fp else 1.0
    r = tp / (tp + fn) if tp + fn else 1.0
    return p, r, f_beta(p, r, beta)


@dataclass
class SentenceCounts:
    tp: int
    fp: int
    fn: int
    chosen_annotator: int
    hyp_edits: tuple[Edit, ...] = ()
    gold_edits: tuple[Edit, ...] = ()
    matched: frozenset[EditKey] = frozenset()


@dataclass
class TypeScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    precision: float = 1.0
    recall: float = 1.0
    f_beta: float = 1.0

    def finalize(self, beta: float) -> "TypeScore":
        self.precision, self.recall, self.f_beta = precision_recall_f(self.tp, self.fp, self.fn, beta)
        return self


@dataclass
class ScoreReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f_beta: float
    beta: float
    per_type: dict[str, TypeScore] | None = None
    per_sentence: list[SentenceCounts] = field(default_factory=list, repr=False)

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, beta: float, **kwargs) -> "ScoreReport":
        p, r, f = precision_recall_f(tp, fp, fn, beta)
        return cls(tp, fp, fn, p, r, f, beta, **kwargs)

    def to_json(self, run_id: str = "", metric: str = "m2", params: dict | None = None) -> dict:
        out = {
            "run_id": run_id, "metric": metric, "beta": self.beta,
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "precision": self.precision, "recall": self.recall, "f_beta": self.f_beta,
            "per_type": {
                k: {"tp": v.tp, "fp": v.fp, "fn": v.fn, "precision": v.precision,
                    "recall": v.recall, "f_beta": v.f_beta}
                for k, v in (self.per_type or {}).items()
            },
            "params": {str(k): str(v) for k, v in (params or {}).items()},
        }
        return out


class EditLattice:
    """Candidate hypothesis edits for one (source, hypothesis) pair."""

    def __init__(self, source: Tokens, hypothesis: Tokens, max_unchanged: int = DEFAULT_MAX_UNCHANGED):
        if max_unchanged < 0:
            raise ValidationError("max_unchanged must be >= 0")
        self.source = list(source)
        self.hypothesis = list(hypothesis)
        self.max_unchanged = max_unchanged
        self.n, self.m = len(self.source), len(self.hypothesis)
        self._base = self._base_arcs()
        # vertex -> [(target vertex, Edit | None)]; None marks a match arc
        self.arcs: dict[tuple[int, int], list[tuple[tuple[int, int], Edit | None]]] = {}
        for u in self._base:
            self.arcs[u] = self._outgoing(u)

    def _base_arcs(self):
        src, hyp, n, m = self.source, self.hypothesis, self.n, self.m
        fwd = [[0] * (m + 1) for _ in range(n + 1)]
        for i in range(n + 1):
            for j in range(m + 1):
                if i == 0 or j == 0:
                    fwd[i][j] = i + j
                    continue
                fwd[i][j] = min(fwd[i - 1][j - 1] + (src[i - 1] != hyp[j - 1]),
                                fwd[i - 1][j] + 1, fwd[i][j - 1] + 1)
        bwd = [[0] * (m + 1) for _ in range(n + 1)]
        for i in range(n, -1, -1):
            for j in range(m, -1, -1):
                if i == n or j == m:
                    bwd[i][j] = (n - i) + (m - j)
                    continue
                bwd[i][j] = min(bwd[i + 1][j + 1] + (src[i] != hyp[j]),
                                bwd[i + 1][j] + 1, bwd[i][j + 1] + 1)
        total = fwd[n][m]
        base: dict[tuple[int, int], list[tuple[tuple[int, int], bool]]] = {}
        for i in range(n + 1):
            for j in range(m + 1):
                if fwd[i][j] + bwd[i][j] != total:
                    continue
                out = []
                if i < n and j < m:
                    same = src[i] == hyp[j]
                    if fwd[i][j] + (not same) + bwd[i + 1][j + 1] == total:
                        out.append(((i + 1, j + 1), same))
                if i < n and fwd[i][j] + 1 + bwd[i + 1][j] == total:
                    out.append(((i + 1, j), False))
                if j < m and fwd[i][j] + 1 + bwd[i][j + 1] == total:
                    out.append(((i, j + 1), False))
                base[(i, j)] = out
        return base

    def _outgoing(self, u):
        out = []
        for v, is_match in self._base[u]:
            if is_match:
                out.append((v, None))
        # fewest matches needed to reach v from u along a run containing a change
        best: dict[tuple[int, int], int] = {}
        stack = [(u, 0, False)]
        seen = set()
        while stack:
            w, used, changed = stack.pop()
            if (w, used, changed) in seen:
                continue
            seen.add((w, used, changed))
            if changed and w != u:
                best[w] = min(best.get(w, used), used)
            for v, is_match in self._base[w]:
                k = used + is_match
                if k <= self.max_unchanged:
                    stack.append((v, k, changed or not is_match))
        for v in sorted(best):
            span = Edit(u[0], v[0], tuple(self.hypothesis[u[1]:v[1]]))
            out.append((v, span))
        return out

    def best_edits(self, gold_keys: frozenset[EditKey] | set[EditKey]) -> list[Edit]:
        """Lattice path with the most gold matches, then fewest edits.

        DP states carry a flag for "just inserted at this source offset" so a
        path never places two insertions at the same point.
        """
        start = ((0, 0), False)
        score: dict = {start: (0, 0)}
        back: dict = {}
        for u in sorted(self.arcs):
            for flag in (False, True):
                state = (u, flag)
                if state not in score:
                    continue
                hits, neg_edits = score[state]
                for v, edit in self.arcs[u]:
                    if edit is None:
                        nxt, cand = (v, False), (hits, neg_edits)
                    else:
                        if flag and edit.is_insertion:
                            continue
                        nxt = (v, edit.is_insertion)
                        cand = (hits + (edit.key in gold_keys), neg_edits - 1)
                    if nxt not in score or cand > score[nxt]:
                        score[nxt] = cand
                        back[nxt] = (state, edit)
        goal = (self.n, self.m)
        finals = [(goal, f) for f in (False, True) if (goal, f) in score]
        state = max(finals, key=lambda st: score[st])
        edits = []
        while state != start:
            state, edit = back[state]
            if edit is not None:
                edits.append(edit)
        edits.reverse()
        return edits


def _counts_for(lattice: EditLattice, gold: GoldAnnotation) -> SentenceCounts:
    gold_edits = tuple(gold.edits)
    gold_keys = frozenset(e.key for e in gold_edits)
    chosen = lattice.best_edits(gold_keys)
    matched = frozenset(e.key for e in chosen) & gold_keys
    tp = len(matched)
    return SentenceCounts(tp, len(chosen) - tp, len(gold_keys) - tp, gold.annotator_id,
                          tuple(chosen), gold_edits, matched)


def score_sentence(source: Tokens, hypothesis: Tokens, gold: GoldAnnotation,
                   max_unchanged: int = DEFAULT_MAX_UNCHANGED) -> SentenceCounts:
    check_edits(gold.edits, len(source))
    return _counts_for(EditLattice(source, hypothesis, max_unchanged), gold)


def score_corpus(entries: Sequence[tuple[Tokens, Tokens, Sequence[GoldAnnotation]]],
                 beta: float = DEFAULT_BETA,
                 max_unchanged: int = DEFAULT_MAX_UNCHANGED) -> ScoreReport:
    tp = fp = fn = 0
    per_sentence = []
    for k, entry in enumerate(entries):
        if len(entry) != 3:
            raise ValidationError(f"entry {k} must be (source, hypothesis, annotations)")
        source, hypothesis, annotations = entry
        if not annotations:
            raise ValidationError(f"entry {k} has no gold annotations")
        lattice = EditLattice(source, hypothesis, max_unchanged)
        best = None
        best_f = -1.0
        for gold in annotations:
            check_edits(gold.edits, len(source))
            counts = _counts_for(lattice, gold)
            f = precision_recall_f(tp + counts.tp, fp + counts.fp, fn + counts.fn, beta)[2]
            if f > best_f:
                best, best_f = counts, f
        tp, fp, fn = tp + best.tp, fp + best.fp, fn + best.fn
        per_sentence.append(best)
    return ScoreReport.from_counts(tp, fp, fn, beta, per_sentence=per_sentence)


def score_m2_document(doc, hypotheses: Sequence[Tokens], beta: float = DEFAULT_BETA,
                      max_unchanged: int = DEFAULT_MAX_UNCHANGED) -> ScoreReport:
    """Score hypotheses against an :class:`M2Document` with one hypothesis per entry."""
    if len(doc.entries) != len(hypotheses):
        raise ValidationError(
            f"{len(hypotheses)} hypotheses for {len(doc.entries)} gold entries")
    return score_corpus([(e.source, h, e.annotations) for e, h in zip(doc.entries, hypotheses)],
                        beta, max_unchanged)
