"""Seeded randomness built on SplitMix64.

SplitMix64 (Steele, Lea & Flood 2014; the reference generator of
``java.util.SplittableRandom``) is a published, public-domain 64-bit
generator whose whole state is one word. Every stochastic fixture in this
package (on-site disorder draws, ensemble seed derivation) flows through
the two functions below, so results replay bit-for-bit from a single
integer seed in any implementation of the algorithm.
"""

from __future__ import annotations

from typing import Iterator

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(seed: int) -> Iterator[int]:
    """Yield the SplitMix64 output stream for ``seed`` (taken mod 2^64)."""
    state = seed & _MASK
    while True:
        state = (state + _GAMMA) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        yield z ^ (z >> 31)


def uniform_doubles(seed: int, n: int) -> list[float]:
    """First ``n`` doubles in [0, 1) from the stream, via the 53-bit construction."""
    stream = splitmix64(seed)
    return [(next(stream) >> 11) * 2.0**-53 for _ in range(n)]


def derive_seeds(master_seed: int, n: int) -> tuple[int, ...]:
    """Derive ``n`` independent child seeds from ``master_seed``.

    Child k is the k-th output of the SplitMix64 stream, the generator's
    documented splitting rule. Ensembles sharded over any worker count
    therefore see identical per-realization seeds.
    """
    stream = splitmix64(master_seed)
    return tuple(next(stream) for _ in range(n))
