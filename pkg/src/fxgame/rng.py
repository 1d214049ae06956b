"""Portable deterministic random source.

The generator algorithm is frozen as part of the package contract so that a
seed identifies the same trade sequence across releases and platforms:

* state expansion from the 64-bit seed: splitmix64 (four successive outputs)
* stream generation: xoshiro256**
* bounded draws: modulo with rejection of the biased low range, so every
  value in ``[0, n)`` is exactly equally likely

Per trade the draw order is fixed: first the direction bit, then the risk
appetite grid index. The compiled kernel implements the identical algorithm;
this module is the reference implementation and the fallback.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** seeded via splitmix64. All state is 64-bit wrapped."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        sm = seed
        sm, self._s0 = _splitmix64(sm)
        sm, self._s1 = _splitmix64(sm)
        sm, self._s2 = _splitmix64(sm)
        sm, self._s3 = _splitmix64(sm)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def next_below(self, n: int) -> int:
        """Uniform draw from [0, n) with rejection of the biased remainder."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = (1 << 64) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n

    def draw_trade(self, grid: int) -> tuple[int, int]:
        """One trade draw: (direction_code, appetite_units).

        direction_code is 0 for buy, 1 for sell; appetite_units is uniform
        on [1, grid]. Direction is always drawn before appetite.
        """
        direction = self.next_u64() & 1
        units = 1 + self.next_below(grid)
        return direction, units
