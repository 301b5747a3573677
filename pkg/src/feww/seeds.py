"""Deterministic seed derivation.

Every randomized component in this package (samplers, generators, harness
trials) takes a 64-bit seed. Independent sub-streams are derived from a
master seed with `derive`, which mixes the master seed and an index path
through splitmix64. The mixing is pure integer arithmetic, so derived
seeds are identical across platforms and Python versions.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 step: maps a 64-bit value to a well-mixed 64-bit value."""
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive(master: int, *path: int) -> int:
    """Derive a fresh 64-bit seed from `master` and an index path.

    derive(seed, t) is the seed of trial t; derive(seed, t, r) the seed of
    run r inside trial t, and so on. Different paths give independent
    streams; the same path always gives the same seed.
    """
    s = splitmix64(master & _MASK64)
    for idx in path:
        s = splitmix64(s ^ (idx & _MASK64))
    return s
