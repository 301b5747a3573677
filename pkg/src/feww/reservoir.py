"""Degree-triggered reservoir sampling over insertion-only edge streams.

A `DegResSampler(d1, d2, s)` keeps, at every prefix of the stream, a
uniform random sample (the reservoir R, capacity s) of the A-vertices
whose degree has reached d1 so far, and collects for each sampled vertex
up to d2 incident edges, starting with the edge that triggered admission.
A vertex therefore ends up with min(d2, deg - d1 + 1) collected edges if
it stays sampled, and the run succeeds when some sampled vertex reaches
d2 collected edges.

Order of operations per update ab (this order matters and is relied on by
tests): count the edge toward deg(a); if deg(a) just reached d1, a becomes
a candidate and is admitted outright while the reservoir has room, else
admitted with probability s/x (x = candidates so far), evicting a uniform
reservoir member and discarding its collected edges; finally, if a is
currently sampled and has fewer than d2 collected edges, ab is collected.
Admission happens once per vertex: an evicted vertex never re-enters.
"""

from __future__ import annotations

import random
from typing import Optional

from .core import Neighbourhood, Sign, StreamUpdate
from .errors import DeletionUnsupported, ProbabilityOutOfRange


def coin(p: float, rng: random.Random) -> bool:
    """True with probability p. Deterministic given rng state and call order."""
    if not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRange(f"p={p} outside [0, 1]")
    return rng.random() < p


class DegResSampler:
    """One reservoir run; see module docstring for the exact step order.

    Strictly sequential: reservoir correctness depends on update order.
    Run several instances with independent rngs for parallel repetitions.
    """

    __slots__ = ("d1", "d2", "s", "rng", "candidates", "_reservoir", "_pos",
                 "_collected", "_own_degrees")

    def __init__(self, d1: int, d2: int, s: int, rng: random.Random):
        if d1 < 1 or d2 < 1 or s < 1:
            raise ValueError(f"d1, d2, s must be >= 1, got {d1}, {d2}, {s}")
        self.d1 = d1
        self.d2 = d2
        self.s = s
        self.rng = rng
        self.candidates = 0  # x: vertices whose degree reached d1 so far
        self._reservoir: list[int] = []
        self._pos: dict[int, int] = {}  # vertex -> slot in _reservoir
        self._collected: dict[int, list[int]] = {}  # vertex -> collected b's
        self._own_degrees: dict[int, int] = {}

    # -- streaming ---------------------------------------------------------

    def offer(self, a: int, b: int, deg_a: int) -> None:
        """Feed edge ab given that a's degree including this edge is deg_a.

        Use this form when a degree table is shared between several runs;
        `process_update` is the self-contained variant.
        """
        if deg_a == self.d1:
            self.candidates += 1
            if len(self._reservoir) < self.s:
                self._pos[a] = len(self._reservoir)
                self._reservoir.append(a)
                self._collected[a] = []
            elif coin(self.s / self.candidates, self.rng):
                slot = self.rng.randrange(self.s)
                evicted = self._reservoir[slot]
                del self._pos[evicted]
                del self._collected[evicted]
                self._reservoir[slot] = a
                self._pos[a] = slot
                self._collected[a] = []
        if a in self._pos:
            bucket = self._collected[a]
            if len(bucket) < self.d2:
                bucket.append(b)

    def process_update(self, u: StreamUpdate) -> None:
        """Self-contained step: maintains an internal degree table."""
        if u.sign is Sign.DELETE:
            raise DeletionUnsupported("reservoir sampling is insertion-only")
        deg = self._own_degrees.get(u.a, 0) + 1
        self._own_degrees[u.a] = deg
        self.offer(u.a, u.b, deg)

    # -- results -----------------------------------------------------------

    def finalize(self) -> Optional[Neighbourhood]:
        """The size-d2 neighbourhood with the smallest center, or None."""
        best = None
        for a, bucket in self._collected.items():
            if len(bucket) == self.d2 and (best is None or a < best):
                best = a
        if best is None:
            return None
        return Neighbourhood(best, tuple(self._collected[best]))

    @property
    def reservoir(self) -> tuple[int, ...]:
        return tuple(self._reservoir)

    def collected_count(self, a: int) -> int:
        return len(self._collected.get(a, ()))

    def stored_edges(self) -> int:
        return sum(len(v) for v in self._collected.values())
