"""Synthetic training pairs from clean monolingual text.

Two regimes are provided:

* :func:`noise_sentence` / :func:`noise_corpus` inject word- and
  character-level errors (substitute from a confusion set, delete, insert,
  swap with the right neighbour) to build pseudo-error parallel data.
* :func:`bart_denoise` builds generic denoising pairs: sentence permutation
  plus Poisson-length span masking, each span collapsed to one mask token.

All randomness comes from :mod:`gec_lab.rng`; a corpus line ``i`` is noised
with ``stream(seed, i)`` so output never depends on scheduling.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from gec_lab.distance import NeighborIndex
from gec_lab.errors import ValidationError
from gec_lab.rng import SplitMix64, stream

OPS = ("substitute", "delete", "insert", "swap")
DEFAULT_OP_WEIGHTS = (0.7, 0.1, 0.1, 0.1)


class ConfusionSet(dict):
    """token -> ordered tuple of replacement candidates (never the token itself)."""

    def __setitem__(self, token, candidates):
        candidates = tuple(candidates)
        if not candidates:
            raise ValidationError(f"empty candidate list for {token!r}")
        if token in candidates:
            raise ValidationError(f"{token!r} lists itself as a confusion candidate")
        super().__setitem__(token, candidates)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Sequence[str]]) -> "ConfusionSet":
        out = cls()
        for k, v in mapping.items():
            out[k] = v
        return out

    @classmethod
    def read(cls, path: str | Path) -> "ConfusionSet":
        out = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line.strip():
                    continue
                if "\t" not in line:
                    raise ValidationError(f"{path}:{lineno}: expected token<TAB>candidates")
                token, cands = line.split("\t", 1)
                out[token] = cands.split()
        return out

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for token in sorted(self):
                fh.write(f"{token}\t{' '.join(self[token])}\n")


def build_confusion_set(vocabulary: Iterable[str], max_distance: int = 1) -> ConfusionSet:
    """Neighbours within ``max_distance`` character edits, nearest then alphabetical."""
    if max_distance < 1:
        raise ValidationError("max_distance must be >= 1")
    index = NeighborIndex(vocabulary, max_distance)
    out = ConfusionSet()
    for word in sorted(index.words):
        near = index.neighbors(word)
        if near:
            out[word] = [w for _, w in near]
    return out


@dataclass
class NoiseConfig:
    word_error_rate: float = 0.15
    char_error_rate: float = 0.02
    op_weights: tuple[float, float, float, float] = DEFAULT_OP_WEIGHTS
    confusion: ConfusionSet = field(default_factory=ConfusionSet)
    vocabulary: tuple[str, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("word_error_rate", "char_error_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        self.op_weights = tuple(float(w) for w in self.op_weights)
        if len(self.op_weights) != 4 or any(w < 0 for w in self.op_weights):
            raise ValidationError("op_weights needs 4 non-negative values (substitute, delete, insert, swap)")
        if abs(sum(self.op_weights) - 1.0) > 1e-9:
            raise ValidationError(f"op_weights must sum to 1, got {sum(self.op_weights)}")
        if not isinstance(self.confusion, ConfusionSet):
            self.confusion = ConfusionSet.from_mapping(self.confusion)
        if self.vocabulary is None:
            self.vocabulary = tuple(sorted(self.confusion))
        else:
            self.vocabulary = tuple(self.vocabulary)
        acc = 0.0
        self._cumulative = []
        for w in self.op_weights:
            acc += w
            self._cumulative.append(acc)

    def pick_op(self, rng: SplitMix64) -> str:
        u = rng.random()
        for op, edge, w in zip(OPS, self._cumulative, self.op_weights):
            if u < edge and w > 0:
                return op
        return next(op for op, w in zip(reversed(OPS), reversed(self.op_weights)) if w > 0)


def _sample_positions(n: int, rate: float, rng: SplitMix64) -> list[int]:
    """Each of ``range(n)`` independently with probability ``rate``."""
    if rate <= 0.0 or n == 0:
        return []
    if rate >= 1.0:
        return list(range(n))
    out = []
    pos = rng.geometric_gap(rate)
    while pos < n:
        out.append(pos)
        pos += 1 + rng.geometric_gap(rate)
    return out


def _noise_words(tokens: list[str], config: NoiseConfig, rng: SplitMix64, tally: Counter | None) -> list[str]:
    chosen = _sample_positions(len(tokens), config.word_error_rate, rng)
    if not chosen:
        return tokens
    out = list(tokens)
    # apply right-to-left so earlier positions keep their meaning
    for pos in reversed(chosen):
        if pos >= len(out):
            continue
        op = config.pick_op(rng)
        if op == "substitute":
            cands = config.confusion.get(out[pos])
            if not cands:
                continue
            out[pos] = cands[rng.randbelow(len(cands))]
        elif op == "delete":
            del out[pos]
        elif op == "insert":
            if not config.vocabulary:
                continue
            out.insert(pos + rng.randbelow(2), config.vocabulary[rng.randbelow(len(config.vocabulary))])
        else:
            if pos + 1 >= len(out):
                continue
            out[pos], out[pos + 1] = out[pos + 1], out[pos]
        if tally is not None:
            tally[op] += 1
    return out


def _noise_chars(token: str, chosen: list[int], config: NoiseConfig, alphabet: str, rng: SplitMix64,
                 tally: Counter | None) -> str:
    chars = list(token)
    for pos in reversed(chosen):
        op = config.pick_op(rng)
        if op == "substitute":
            ch = alphabet[rng.randbelow(len(alphabet))]
            if ch == chars[pos]:
                continue
            chars[pos] = ch
        elif op == "delete":
            if len(chars) == 1:
                continue
            del chars[pos]
        elif op == "insert":
            chars.insert(pos + rng.randbelow(2), alphabet[rng.randbelow(len(alphabet))])
        else:
            if pos + 1 >= len(chars):
                continue
            chars[pos], chars[pos + 1] = chars[pos + 1], chars[pos]
        if tally is not None:
            tally["char_" + op] += 1
    return "".join(chars)


def noise_sentence(tokens: Sequence[str], config: NoiseConfig, rng: SplitMix64,
                   tally: Counter | None = None) -> list[str]:
    """Corrupt one tokenized sentence.

    Every token is independently selected with probability
    ``word_error_rate`` and receives one operation drawn by ``op_weights``.
    Operations that cannot apply (no confusion candidates, swap at the last
    token) are skipped. Character noise then runs the same way inside each
    surviving token, inserting or substituting characters seen in the
    sentence. Applied operations are counted into ``tally`` when given.
    """
    out = _noise_words(list(tokens), config, rng, tally)
    if config.char_error_rate > 0 and out:
        # one Bernoulli process over all characters, then grouped per token
        hits = _sample_positions(sum(map(len, out)), config.char_error_rate, rng)
        if hits:
            alphabet = "".join(sorted(set("".join(tokens))))
            per_token: dict[int, list[int]] = {}
            k, offset = 0, 0
            for pos in hits:
                while pos >= offset + len(out[k]):
                    offset += len(out[k])
                    k += 1
                per_token.setdefault(k, []).append(pos - offset)
            for k, chosen in per_token.items():
                out[k] = _noise_chars(out[k], chosen, config, alphabet, rng, tally)
    return out


def noise_corpus(lines: Iterable[str], config: NoiseConfig, seed: int | None = None) -> Iterator[tuple[list[str], list[str]]]:
    """Stream ``(noised, original)`` token pairs, one per input line."""
    seed = config.seed if seed is None else seed
    for i, line in enumerate(lines):
        tokens = line.split()
        yield noise_sentence(tokens, config, stream(seed, i)), tokens


# --- generic denoising ----------------------------------------------------

@dataclass
class DenoiseConfig:
    mask_ratio: float = 0.3
    span_lambda: float = 3.0
    shuffle_sentences: bool = True
    mask_token: str = "<mask>"
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.mask_ratio <= 1.0:
            raise ValidationError(f"mask_ratio must lie in [0, 1], got {self.mask_ratio}")
        if not self.span_lambda > 0:
            raise ValidationError(f"span_lambda must be positive, got {self.span_lambda}")


def sample_mask_spans(n_tokens: int, config: DenoiseConfig, rng: SplitMix64) -> list[tuple[int, int]]:
    """Sorted, non-overlapping ``(start, length)`` spans covering >= mask_ratio of the tokens.

    Span lengths are drawn i.i.d. from Poisson(span_lambda) until their sum
    reaches the target; only the last one is clipped if it would run past the
    document. The spans are then laid out in draw order at a uniformly random
    arrangement among the unmasked tokens, so lengths keep their Poisson law
    and no span is rejected for overlapping. Zero-length spans are insertion
    points.
    """
    target = math.ceil(config.mask_ratio * n_tokens - 1e-9)
    if target <= 0:
        return []
    lengths = []
    total = 0
    while total < target:
        length = min(rng.poisson(config.span_lambda), n_tokens - total)
        lengths.append(length)
        total += length
    # choose which of (free tokens + spans) slots hold a span: partial Fisher-Yates
    n_slots = n_tokens - total + len(lengths)
    slots = list(range(n_slots))
    for k in range(len(lengths)):
        j = k + rng.randbelow(n_slots - k)
        slots[k], slots[j] = slots[j], slots[k]
    span_slots = sorted(slots[:len(lengths)])
    spans = []
    offset = 0  # tokens consumed by earlier spans
    for k, (slot, length) in enumerate(zip(span_slots, lengths)):
        start = slot - k + offset
        spans.append((start, length))
        offset += length
    return spans


def bart_denoise(sentences: Sequence[Sequence[str]], config: DenoiseConfig,
                 rng: SplitMix64) -> tuple[list[str], list[str]]:
    original = [t for s in sentences for t in s]
    order = list(range(len(sentences)))
    if config.shuffle_sentences:
        rng.shuffle(order)
    shuffled = [t for i in order for t in sentences[i]]
    spans = sample_mask_spans(len(shuffled), config, rng)
    if not spans:
        return shuffled, original
    noised = []
    pos = 0
    for start, length in spans:
        noised.extend(shuffled[pos:start])
        noised.append(config.mask_token)
        pos = start + length
    noised.extend(shuffled[pos:])
    return noised, original


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file with ``#`` comments."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key] = value
    return out


def noise_config_from_file(path: str | Path, seed: int = 0) -> NoiseConfig:
    """Build a :class:`NoiseConfig`; relative resource paths resolve against the file."""
    raw = read_config(path)
    base = Path(path).parent
    known = {"word_error_rate", "char_error_rate", "op_weights", "confusion", "vocab", "max_distance"}
    unknown = set(raw) - known
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    kwargs: dict = {"seed": seed}
    for key in ("word_error_rate", "char_error_rate"):
        if key in raw:
            kwargs[key] = float(raw[key])
    if "op_weights" in raw:
        kwargs["op_weights"] = tuple(float(x) for x in raw["op_weights"].replace(",", " ").split())
    vocab = None
    if "vocab" in raw:
        vocab_path = base / raw["vocab"]
        vocab = tuple(sorted({w.strip() for w in vocab_path.read_text(encoding="utf-8").split() if w.strip()}))
        kwargs["vocabulary"] = vocab
    if "confusion" in raw:
        kwargs["confusion"] = ConfusionSet.read(base / raw["confusion"])
    elif vocab:
        kwargs["confusion"] = build_confusion_set(vocab, int(raw.get("max_distance", 1)))
    return NoiseConfig(**kwargs)
