"""SplitMix64: a tiny, fully specified 64-bit generator.

Used for coefficient sequences so that ratio tables replicate bit-for-bit on
any platform and numpy version. State is a single 64-bit word; each draw adds
the golden-ratio increment and applies the Stafford "mix13" finalizer.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    @classmethod
    def derive(cls, seed: int, *keys: int) -> "SplitMix64":
        """Independent stream for a tuple of integer keys (e.g. N, trial)."""
        state = seed & MASK64
        for key in keys:
            state = _mix((state + GOLDEN * ((key & MASK64) + 1)) & MASK64)
        return cls(state)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _mix(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def sign(self) -> int:
        return 1 if self.next_u64() >> 63 else -1

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n
