"""Insertion-only witness search: staggered parallel reservoir runs.

Given a frequency threshold d and an integral approximation factor alpha,
run alpha `DegResSampler` instances over the same stream with trigger
thresholds d1(i) = max(1, ceil(i*d/alpha)) for i = 0..alpha-1, collection
target d2 = ceil(d/alpha) and reservoir capacity s = ceil(ln(n) * n**(1/alpha)).
If some A-vertex has degree >= d, at least one run finds a size-d2
neighbourhood with probability at least 1 - 1/n.

All runs see identical degrees, so a single shared degree table is kept
(n entries) instead of one per run. Per-run rngs are derived from the
master seed by run index. Result arbitration is deterministic: the
successful run with the smallest index wins, and within a run the
smallest qualifying center wins.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import Neighbourhood, Sign, StreamUpdate
from .errors import DeletionUnsupported, MalformedStream
from .reservoir import DegResSampler
from .seeds import derive


@dataclass(frozen=True)
class InsertionOnlyConfig:
    n: int
    d: int
    alpha: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        max_alpha = math.ceil(math.log2(self.n)) + 1 if self.n > 1 else 1
        if not 1 <= self.alpha <= max_alpha:
            raise ValueError(
                f"alpha={self.alpha} outside permitted range [1, {max_alpha}] for n={self.n}"
            )

    @property
    def reservoir_size(self) -> int:
        """s = ceil(ln(n) * n**(1/alpha)), floored at 1 (n=1 gives ln n = 0)."""
        return max(1, math.ceil(math.log(self.n) * self.n ** (1.0 / self.alpha)))

    @property
    def witness_target(self) -> int:
        """d2 = ceil(d/alpha)."""
        return -(-self.d // self.alpha)

    def trigger_threshold(self, i: int) -> int:
        """d1(i) = max(1, ceil(i*d/alpha))."""
        return max(1, -(-(i * self.d) // self.alpha))

    def edge_bound(self) -> int:
        """Hard cap on stored edges: alpha * s * d2."""
        return self.alpha * self.reservoir_size * self.witness_target


@dataclass(frozen=True)
class SpaceReport:
    """Retained logical items after a run (counted, not process bytes)."""

    stored_edges: int
    reservoir_entries: int
    degree_entries: int
    counters: int

    @property
    def words(self) -> int:
        return self.reservoir_entries + self.degree_entries + self.counters


class InsertionOnlyRun:
    """Outcome of one insertion-only execution."""

    def __init__(self, config: InsertionOnlyConfig, result: Optional[Neighbourhood],
                 samplers: list[DegResSampler], winning_run: Optional[int]):
        self.config = config
        self.result = result
        self.samplers = samplers
        self.winning_run = winning_run

    def space_report(self) -> SpaceReport:
        return SpaceReport(
            stored_edges=sum(s.stored_edges() for s in self.samplers),
            reservoir_entries=sum(len(s.reservoir) for s in self.samplers),
            degree_entries=self.config.n,
            counters=self.config.alpha,
        )


def run_insertion_only(config: InsertionOnlyConfig,
                       updates: Iterable[StreamUpdate]) -> InsertionOnlyRun:
    """Feed the whole stream to all runs and arbitrate the results."""
    n = config.n
    s = config.reservoir_size
    d2 = config.witness_target
    samplers = [
        DegResSampler(config.trigger_threshold(i), d2, s,
                      random.Random(derive(config.seed, i)))
        for i in range(config.alpha)
    ]
    degrees = [0] * (n + 1)
    for u in updates:
        if u.sign is Sign.DELETE:
            raise DeletionUnsupported("insertion-only algorithm received a deletion")
        if not 1 <= u.a <= n:
            raise MalformedStream(f"A-index {u.a} outside [1, {n}]")
        degrees[u.a] += 1
        deg = degrees[u.a]
        for smp in samplers:
            smp.offer(u.a, u.b, deg)
    result = None
    winning = None
    for i, smp in enumerate(samplers):
        nb = smp.finalize()
        if nb is not None:
            result, winning = nb, i
            break
    return InsertionOnlyRun(config, result, samplers, winning)
