"""Deterministic 64-bit random stream used everywhere randomness is needed.

The generator is counter-based SplitMix64 (Steele, Lea & Flood's mixer as
popularized by Vigna's splitmix64.c).  Draw ``i`` (1-based) from a stream
seeded with ``s`` is::

    mix64(s + i * 0x9E3779B97F4A7C15)        (all arithmetic mod 2**64)

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

Because the state is an affine function of the draw index, the stream can be
produced sequentially (scalar), in bulk (NumPy), or inside compiled kernels,
and all three routes are bit-identical.  Any reimplementation in another
language only has to reproduce the two formulas above.

Derived values:

* ``uniform``: top 53 bits of a draw scaled by 2**-53, giving a float64 in
  [0, 1).
* ``below(n)``: ``draw % n``.  The modulo bias is below 2**-32 for every n
  used here and is accepted for the sake of a one-line cross-language rule.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def hash64(*parts: bytes | str | int) -> int:
    """Stable 64-bit content hash (first 8 bytes of SHA-256, big-endian).

    Used to key mock providers off input content.  Python's builtin ``hash``
    is salted per process and therefore unusable here.
    """
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, str):
            part = part.encode("utf-8")
        elif isinstance(part, int):
            part = (part & MASK64).to_bytes(8, "big")
        h.update(part)
        h.update(b"\x1f")  # separator so ("ab","c") != ("a","bc")
    return int.from_bytes(h.digest()[:8], "big")


class SplitMix64:
    """Sequential view of the counter-based stream.

    The pair ``(seed, counter)`` fully identifies the stream position, so it
    can be handed off to compiled kernels and resynchronized afterwards.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int, counter: int = 0):
        self.seed = seed & MASK64
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        return mix64((self.seed + self.counter * GOLDEN) & MASK64)

    def uniform(self) -> float:
        """Float64 in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def uniform_array(self, count: int) -> np.ndarray:
        """Bulk draw of ``count`` uniforms, advancing the counter."""
        draws = bulk_u64(self.seed, self.counter, count)
        self.counter += count
        return (draws >> np.uint64(11)).astype(np.float64) * 2.0**-53


def bulk_u64(seed: int, counter: int, count: int) -> np.ndarray:
    """Draws ``counter+1 .. counter+count`` of the stream, vectorized."""
    idx = np.arange(counter + 1, counter + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def stream_for(seed: int, *context: bytes | str | int) -> SplitMix64:
    """Stream keyed by a base seed plus arbitrary content.

    The effective seed is ``mix64(seed ^ hash64(context...))`` so distinct
    contexts give statistically independent streams.
    """
    if context:
        return SplitMix64(mix64((seed & MASK64) ^ hash64(*context)))
    return SplitMix64(seed)
