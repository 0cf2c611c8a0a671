"""Deterministic synthetic text for tests."""
from __future__ import annotations

import random

DETERMINERS = ["the", "a", "this", "that", "every", "some"]
ADJECTIVES = ["small", "bright", "quiet", "heavy", "simple", "strange", "careful", "modern",
              "ancient", "gentle", "famous", "patient", "curious", "narrow", "golden"]
NOUNS = ["teacher", "student", "garden", "window", "letter", "river", "market", "doctor",
         "village", "kitchen", "mountain", "library", "picture", "journey", "question",
         "message", "stranger", "morning", "history", "machine"]
VERBS = ["visited", "painted", "opened", "followed", "answered", "watched", "remembered",
         "described", "collected", "carried", "noticed", "explained", "finished", "ignored"]
PREPOSITIONS = ["in", "near", "behind", "under", "across", "beside", "through", "after"]
ADVERBS = ["quickly", "slowly", "quietly", "finally", "happily", "carefully", "rarely"]

VOCABULARY = sorted(set(DETERMINERS + ADJECTIVES + NOUNS + VERBS + PREPOSITIONS + ADVERBS + [".", ","]))


def sentence(rng: random.Random) -> list[str]:
    np1 = [rng.choice(DETERMINERS)] + ([rng.choice(ADJECTIVES)] if rng.random() < 0.6 else []) + [rng.choice(NOUNS)]
    np2 = [rng.choice(DETERMINERS)] + ([rng.choice(ADJECTIVES)] if rng.random() < 0.5 else []) + [rng.choice(NOUNS)]
    out = np1 + [rng.choice(VERBS)] + np2
    if rng.random() < 0.5:
        out += [rng.choice(PREPOSITIONS), rng.choice(DETERMINERS), rng.choice(NOUNS)]
    if rng.random() < 0.3:
        out.insert(len(np1), rng.choice(ADVERBS))
    return out + ["."]


def corpus(n: int, seed: int = 0) -> list[list[str]]:
    rng = random.Random(seed)
    return [sentence(rng) for _ in range(n)]
