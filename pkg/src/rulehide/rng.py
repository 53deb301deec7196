"""Deterministic pseudo-random bits, reproducible from the seed alone.

The generator is splitmix64: a 64-bit counter advanced by the golden-ratio
increment 0x9E3779B97F4A7C15, with the counter value scrambled through two
xor-shift-multiply rounds (constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB)
and a final 31-bit xor-shift. It passes standard statistical batteries, needs no
warm-up, and is small enough to re-implement exactly in any language, which is
the point: two implementations seeded identically must produce identical
synthetic instances.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


class BitStream:
    """Stream of uniform bits. One output word is consumed per bit.

    Spending a full 64-bit word on every bit is deliberately wasteful: taking
    the top bit of each word keeps the seed-to-bit mapping trivial to replicate
    and avoids any ambiguity about bit order within a word.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_word(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_bit(self) -> bool:
        return bool(self.next_word() >> 63)
