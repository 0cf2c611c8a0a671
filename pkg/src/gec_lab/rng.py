"""Seeded, splittable pseudo-random streams.

Every randomized routine in the toolkit draws from :class:`SplitMix64`, a
64-bit counter-based generator (Steele, Lea & Flood, 2014). Child streams are
derived from a parent seed and a tuple of keys (usually a sentence index), so
work can be split across processes without changing any output.

Uniform floats take the top 53 bits of each 64-bit output.
"""
from __future__ import annotations

import hashlib
import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _key_to_int(key: int | str) -> int:
    if isinstance(key, int):
        return key & MASK64
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(seed: int, *keys: int | str) -> int:
    """Fold ``keys`` into ``seed`` to get the seed of an independent child stream."""
    state = mix64((seed & MASK64) ^ GOLDEN_GAMMA)
    for key in keys:
        state = mix64(state ^ mix64((_key_to_int(key) + GOLDEN_GAMMA) & MASK64))
    return state


class SplitMix64:
    """Minimal generator API used across the toolkit.

    ``random.Random`` is deliberately not subclassed: its constructor seeds a
    Mersenne Twister on every instantiation, which dominates the cost of
    creating one stream per corpus line.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int = 0):
        self._state = seed & MASK64

    def next64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of resolution."""
        return (self.next64() >> 11) * (1.0 / (1 << 53))

    def random_array(self, size: int) -> np.ndarray:
        """The next ``size`` values of :meth:`random`, computed in bulk."""
        steps = np.arange(1, size + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + steps * np.uint64(GOLDEN_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + size * GOLDEN_GAMMA) & MASK64
        return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("randbelow requires n > 0")
        if n == 1:
            return 0
        bits = (n - 1).bit_length()
        while True:
            r = self.next64() >> (64 - bits)
            if r < n:
                return r

    def choice(self, seq):
        if not seq:
            raise IndexError("cannot choose from an empty sequence")
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def geometric_gap(self, p: float) -> int:
        """Number of failures before the first success of Bernoulli(p) trials."""
        if p >= 1.0:
            return 0
        u = 1.0 - self.random()
        return int(math.log(u) / math.log1p(-p))

    def poisson(self, lam: float) -> int:
        """Poisson draw by Knuth's product method; intended for small means."""
        limit = math.exp(-lam)
        k = 0
        prod = self.random()
        while prod > limit:
            k += 1
            prod *= self.random()
        return k

    def getstate(self) -> int:
        return self._state

    def setstate(self, state: int) -> None:
        self._state = state & MASK64

    def split(self, *keys: int | str) -> "SplitMix64":
        """Child stream keyed on the current state; does not advance this stream."""
        return SplitMix64(derive_seed(self._state, *keys))


def stream(seed: int, *keys: int | str) -> SplitMix64:
    """The stream for ``(seed, *keys)``; identical arguments give identical streams."""
    return SplitMix64(derive_seed(seed, *keys))
