"""Deterministic pseudo-randomness for sampling and campaigns.

All randomness in the package flows from a single 64-bit seed through
SplitMix64 (Steele, Lea & Flood's mixer, as used to seed xoshiro
generators).  The generator is tiny and exactly specified, so seeded
campaigns are reproducible across machines and reimplementable in any
language:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z <- (z xor (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output: z xor (z >> 31)

Derived streams (per instance, per purpose) are obtained with
``derive_seed``, which is itself one SplitMix64 output.
"""

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed for the ``index``-th substream of ``seed`` (index >= 0)."""
    return _mix((seed + (index + 1) * _GAMMA) & _MASK)


class SplitMix64:
    """SplitMix64 stream over 64-bit unsigned integers."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def randint(self, bound: int) -> int:
        """Uniform integer in [0, bound).  Uses rejection to avoid
        modulo bias; bound must be positive and < 2^64."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = _MASK - (_MASK + 1) % bound
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % bound

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform float in [lo, hi) from the top 53 bits."""
        return lo + (hi - lo) * ((self.next_u64() >> 11) / float(1 << 53))

    def fraction(self, scale: int = 4) -> Fraction:
        """Positive rational (1+a)/(1+b) with a, b uniform in [0, scale);
        values land in [1/scale, scale]."""
        num = 1 + self.randint(scale)
        den = 1 + self.randint(scale)
        return Fraction(num, den)
