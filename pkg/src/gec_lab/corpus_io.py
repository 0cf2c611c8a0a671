"""Reading and writing M2 gold files and parallel text corpora."""
from __future__ import annotations

from itertools import zip_longest
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from gec_lab.alignment import Edit, check_edits
from gec_lab.errors import M2ParseError, ValidationError

NONE_CORRECTION = "-NONE-"
NOOP_TYPE = "noop"

LANGUAGE_CODES = frozenset({
    "ar_AR", "cs_CZ", "de_DE", "en_XX", "es_XX", "et_EE", "fi_FI", "fr_XX",
    "gu_IN", "hi_IN", "it_IT", "ja_XX", "kk_KZ", "ko_KR", "lt_LT", "lv_LV",
    "my_MM", "ne_NP", "nl_XX", "ro_RO", "ru_RU", "si_LK", "tr_TR", "vi_VN",
    "zh_CN",
})


@dataclass
class GoldAnnotation:
    annotator_id: int
    edits: list[Edit] = field(default_factory=list)
    is_noop: bool = False
    # (required, comment) per edit, carried only so emit_m2 can round-trip
    extras: list[tuple[str, str]] = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        if self.is_noop and self.edits:
            raise ValidationError("a noop annotation cannot carry edits")


@dataclass
class M2Entry:
    source: list[str]
    annotations: list[GoldAnnotation]


@dataclass
class M2Document:
    entries: list[M2Entry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[M2Entry]:
        return iter(self.entries)


def _split_tokens(text: str) -> list[str]:
    return [t for t in text.split(" ") if t]


def _parse_edit_line(body: str, lineno: int, source_len: int):
    fields = body.split("|||")
    if len(fields) != 6:
        raise M2ParseError(f"expected 6 '|||'-separated fields, found {len(fields)}", lineno)
    span, etype, correction, required, comment, annotator = fields
    try:
        start, end = (int(x) for x in span.split())
        annotator_id = int(annotator)
    except ValueError:
        raise M2ParseError(f"malformed span or annotator id in {body!r}", lineno) from None
    if annotator_id < 0:
        raise M2ParseError("annotator id must be non-negative", lineno)
    if etype == NOOP_TYPE or (start == -1 and end == -1):
        return annotator_id, None, None
    if not 0 <= start <= end <= source_len:
        raise ValidationError(
            f"line {lineno}: edit span [{start}, {end}) out of bounds for {source_len} tokens")
    replacement = () if correction == NONE_CORRECTION else tuple(_split_tokens(correction))
    try:
        edit = Edit(start, end, replacement, etype)
    except ValidationError as exc:
        raise ValidationError(f"line {lineno}: {exc}") from None
    return annotator_id, edit, (required, comment)


def parse_m2(text: str) -> M2Document:
    """Parse an M2 document.

    Annotations are grouped by annotator id in order of first appearance.
    ``REQUIRED`` and comment fields are kept only for re-emission.
    """
    text = text.replace("\r\n", "\n")
    doc = M2Document()
    source: list[str] | None = None
    groups: dict[int, GoldAnnotation] = {}

    def close():
        nonlocal source, groups
        if source is None:
            return
        anns = list(groups.values()) or [GoldAnnotation(0, is_noop=True)]
        for ann in anns:
            try:
                check_edits(ann.edits, len(source))
            except ValidationError as exc:
                raise ValidationError(f"annotator {ann.annotator_id} of entry {len(doc.entries)}: {exc}") from None
        doc.entries.append(M2Entry(source, anns))
        source, groups = None, {}

    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            close()
        elif line.startswith("S ") or line == "S":
            if source is not None:
                raise M2ParseError("new 'S' line before blank separator", lineno)
            source = _split_tokens(line[2:])
        elif line.startswith("A "):
            if source is None:
                raise M2ParseError("'A' line without a preceding 'S' line", lineno)
            annotator_id, edit, extras = _parse_edit_line(line[2:], lineno, len(source))
            ann = groups.setdefault(annotator_id, GoldAnnotation(annotator_id))
            if edit is None:
                if ann.edits:
                    raise M2ParseError(f"noop for annotator {annotator_id} who already has edits", lineno)
                ann.is_noop = True
            else:
                if ann.is_noop:
                    raise M2ParseError(f"edit for annotator {annotator_id} after a noop", lineno)
                ann.edits.append(edit)
                ann.extras.append(extras)
        else:
            raise M2ParseError(f"unrecognised line {line[:30]!r}", lineno)
    close()
    return doc


def read_m2(path: str | Path) -> M2Document:
    return parse_m2(Path(path).read_text(encoding="utf-8"))


def _edit_line(edit: Edit, annotator_id: int, extras: tuple[str, str]) -> str:
    correction = " ".join(edit.replacement) if edit.replacement else NONE_CORRECTION
    required, comment = extras
    return (f"A {edit.start} {edit.end}|||{edit.type_label}|||{correction}"
            f"|||{required}|||{comment}|||{annotator_id}")


def emit_m2(doc: M2Document) -> str:
    lines: list[str] = []
    for entry in doc.entries:
        lines.append("S " + " ".join(entry.source) if entry.source else "S")
        for ann in entry.annotations:
            if ann.is_noop:
                lines.append(f"A -1 -1|||{NOOP_TYPE}|||{NONE_CORRECTION}|||REQUIRED|||-NONE-|||{ann.annotator_id}")
                continue
            extras = ann.extras if len(ann.extras) == len(ann.edits) else []
            for k, edit in enumerate(ann.edits):
                lines.append(_edit_line(edit, ann.annotator_id,
                                        extras[k] if extras else ("REQUIRED", "-NONE-")))
        lines.append("")
    return "".join(line + "\n" for line in lines)


def write_m2(doc: M2Document, path: str | Path) -> None:
    Path(path).write_text(emit_m2(doc), encoding="utf-8")


def entry_from_edits(source: Sequence[str], edits: Sequence[Edit], annotator_id: int = 0) -> M2Entry:
    ann = GoldAnnotation(annotator_id, list(edits), is_noop=not edits)
    return M2Entry(list(source), [ann])


# --- parallel text --------------------------------------------------------

def read_lines(path: str | Path) -> Iterator[list[str]]:
    """Yield one token list per line; streams, so memory stays flat."""
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            yield _split_tokens(line.rstrip("\r\n"))


def read_parallel(src_path: str | Path, tgt_path: str | Path) -> Iterator[tuple[list[str], list[str]]]:
    missing = object()
    pairs = zip_longest(read_lines(src_path), read_lines(tgt_path), fillvalue=missing)
    for lineno, (s, t) in enumerate(pairs, 1):
        if s is missing or t is missing:
            raise ValidationError(f"parallel files differ in length at line {lineno}")
        yield s, t


def write_lines(sentences: Iterable[Sequence[str]], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tokens in sentences:
            fh.write(" ".join(tokens) + "\n")
            n += 1
    return n


def filter_unchanged(pairs: Iterable[tuple[Sequence[str], Sequence[str]]]) -> list[tuple[Sequence[str], Sequence[str]]]:
    """Drop pairs whose source and target are token-identical."""
    return [(s, t) for s, t in pairs if list(s) != list(t)]


def tag_language(sentence: Sequence[str], lang_code: str, position: str = "final",
                 registry: frozenset[str] = LANGUAGE_CODES) -> list[str]:
    if lang_code not in registry:
        raise ValidationError(
            f"unknown language code {lang_code!r}; known codes: {', '.join(sorted(registry))}")
    tag = f"<{lang_code}>"
    if position == "final":
        return [*sentence, tag]
    if position == "initial":
        return [tag, *sentence]
    raise ValidationError(f"tag position must be 'initial' or 'final', not {position!r}")
