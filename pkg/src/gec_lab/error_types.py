"""Rule-based edit typing without a POS tagger, and per-type M2 scores.

Labels: PUNCT, ORTH, WO, SPELL, DET, PREP and OTHER. Rules are tried in that
order and the first match wins. ERRANT gold labels (``R:PUNCT``, ``M:DET``,
...) are honoured with their operation prefix stripped; labels outside this
set are reported as OTHER.
"""
from __future__ import annotations

import string
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from gec_lab.alignment import Edit
from gec_lab.distance import levenshtein
from gec_lab.m2_scorer import DEFAULT_BETA, DEFAULT_MAX_UNCHANGED, ScoreReport, TypeScore, score_corpus

LABELS = ("PUNCT", "DET", "PREP", "ORTH", "SPELL", "WO", "OTHER")
UNKNOWN = "UNK"

DEFAULT_DETERMINERS = frozenset(
    "a an the this that these those my your his her its our their some any no every each "
    "either neither another much many few several all both".split())
DEFAULT_PREPOSITIONS = frozenset(
    "about above across after against along among around at before behind below beneath "
    "beside between beyond by despite down during except for from in inside into like near "
    "of off on onto out outside over past since through throughout to toward towards under "
    "underneath until unto up upon with within without".split())


def _is_punct_char(ch: str) -> bool:
    return ch in string.punctuation or unicodedata.category(ch).startswith("P")


def is_punctuation(text: str) -> bool:
    return bool(text) and all(_is_punct_char(c) for c in text)


@dataclass
class TypeLexicons:
    determiners: frozenset[str] = DEFAULT_DETERMINERS
    prepositions: frozenset[str] = DEFAULT_PREPOSITIONS
    vocabulary: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        self.determiners = frozenset(w.casefold() for w in self.determiners)
        self.prepositions = frozenset(w.casefold() for w in self.prepositions)
        self.vocabulary = frozenset(w.casefold() for w in self.vocabulary)

    @classmethod
    def from_dir(cls, path: str | Path) -> "TypeLexicons":
        """Load ``determiners.txt``, ``prepositions.txt`` and ``vocab.txt`` (any may be absent)."""
        path = Path(path)

        def load(name, default):
            f = path / name
            if not f.exists():
                return default
            return frozenset(line.strip() for line in f.read_text(encoding="utf-8").splitlines() if line.strip())

        return cls(load("determiners.txt", DEFAULT_DETERMINERS),
                   load("prepositions.txt", DEFAULT_PREPOSITIONS),
                   load("vocab.txt", frozenset()))


def _residue(a: Sequence[str], b: Sequence[str]) -> list[str]:
    ca, cb = Counter(t.casefold() for t in a), Counter(t.casefold() for t in b)
    common = ca & cb
    return list((ca - common).elements()) + list((cb - common).elements())


def classify_edit(edit: Edit, source: Sequence[str], lexicons: TypeLexicons) -> str:
    orig = list(source[edit.start:edit.end])
    corr = list(edit.replacement)
    o_text, c_text = "".join(orig), "".join(corr)

    if (is_punctuation(o_text) or not o_text) and (is_punctuation(c_text) or not c_text):
        return "PUNCT"
    if o_text.casefold() == c_text.casefold():
        return "ORTH"
    if orig and Counter(orig) == Counter(corr):
        return "WO"
    if len(orig) == 1 and len(corr) == 1 and lexicons.vocabulary:
        o, c = orig[0].casefold(), corr[0].casefold()
        if (o not in lexicons.vocabulary and c in lexicons.vocabulary
                and levenshtein(o, c, 2) <= 2):
            return "SPELL"
    residue = _residue(orig, corr)
    if residue and all(t in lexicons.determiners for t in residue):
        return "DET"
    if residue and all(t in lexicons.prepositions for t in residue):
        return "PREP"
    return "OTHER"


def normalize_label(label: str) -> str | None:
    """Map an annotated label onto :data:`LABELS`; None when it must be re-derived."""
    if not label or label == UNKNOWN:
        return None
    if len(label) > 2 and label[1] == ":" and label[0] in "MRU":
        label = label[2:]
    return label if label in LABELS else "OTHER"


def _gold_label(edit: Edit, source, lexicons) -> str:
    return normalize_label(edit.type_label) or classify_edit(edit, source, lexicons)


def score_by_type(entries, lexicons: TypeLexicons, beta: float = DEFAULT_BETA,
                  max_unchanged: int = DEFAULT_MAX_UNCHANGED) -> ScoreReport:
    """M2 scores with a per-type breakdown.

    ``entries`` is the same ``(source, hypothesis, annotations)`` sequence
    taken by :func:`score_corpus`. Matched and missed gold edits are counted
    under the gold label; spurious hypothesis edits under their rule label.
    """
    entries = list(entries)
    report = score_corpus(entries, beta, max_unchanged)
    per_type: dict[str, TypeScore] = {}
    for (source, _hyp, _anns), counts in zip(entries, report.per_sentence):
        for g in counts.gold_edits:
            label = _gold_label(g, source, lexicons)
            slot = per_type.setdefault(label, TypeScore())
            if g.key in counts.matched:
                slot.tp += 1
            else:
                slot.fn += 1
        for h in counts.hyp_edits:
            if h.key in counts.matched:
                continue
            slot = per_type.setdefault(classify_edit(h, source, lexicons), TypeScore())
            slot.fp += 1
    report.per_type = {k: v.finalize(beta) for k, v in per_type.items()}
    return report


def type_rows(report: ScoreReport, top: int | None = 5, exclude: Sequence[str] = ("OTHER",)) -> list[str]:
    """Types ordered by gold frequency (tp + fn), most frequent first, ties by name."""
    items = [(k, v) for k, v in (report.per_type or {}).items() if k not in exclude]
    items.sort(key=lambda kv: (-(kv[1].tp + kv[1].fn), kv[0]))
    names = [k for k, _ in items]
    return names if top is None else names[:top]


def render_type_table(report: ScoreReport, top: int | None = 5,
                      exclude: Sequence[str] = ("OTHER",), decimals: int = 1) -> str:
    """Aligned ``Error Type / P / R / F`` table, scores as percentages."""
    f_name = f"F{report.beta:g}"
    header = ("Error Type", "P", "R", f_name)
    rows = [header]
    for name in type_rows(report, top, exclude):
        s = report.per_type[name]
        rows.append((name, *(f"{100 * x:.{decimals}f}" for x in (s.precision, s.recall, s.f_beta))))
    width0 = max(len(r[0]) for r in rows)
    widths = [max(len(r[k]) for r in rows) for k in range(1, 4)]
    lines = []
    for r in rows:
        cells = [r[0].ljust(width0)] + [c.rjust(w) for c, w in zip(r[1:], widths)]
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"
