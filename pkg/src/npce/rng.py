"""SplitMix64 pseudo-random source used by the instance generator.

The generator is deliberately tiny and fully specified so that instances can
be reproduced bit-for-bit by any implementation:

    state  <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z      <- state
    z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2**64)
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2**64)
    output <- z ^ (z >> 31)

A uniform double in [0, 1) is ``(output >> 11) * 2**-53``.  Normal variates
use the basic Box-Muller transform and consume two uniforms per variate
(the second half of the pair is discarded, which keeps the draw order
trivial to replicate).
"""

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return low + (high - low) * u

    def normal(self) -> float:
        # 1 - u keeps the log argument in (0, 1]
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def below(self, k: int) -> int:
        """Integer in [0, k) by multiply-shift (bias is below 2**-53 for desk k)."""
        return min(int(self.uniform() * k), k - 1)

    def permutation(self, k: int) -> list:
        """Fisher-Yates shuffle of range(k), swapping from the top down."""
        items = list(range(k))
        for i in range(k - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items
