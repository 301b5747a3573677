"""Degree-triggered reservoir sampling: traces, distribution, invariants."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feww.core import Sign, StreamUpdate
from feww.errors import DeletionUnsupported, ProbabilityOutOfRange
from feww.reservoir import DegResSampler, coin


def test_coin_degenerate_probabilities():
    rng = random.Random(0)
    assert all(coin(1.0, rng) for _ in range(200))
    assert not any(coin(0.0, rng) for _ in range(200))


def test_coin_out_of_range():
    rng = random.Random(0)
    with pytest.raises(ProbabilityOutOfRange):
        coin(-0.1, rng)
    with pytest.raises(ProbabilityOutOfRange):
        coin(1.5, rng)


def test_coin_monte_carlo_quarter():
    # 1e5 draws at p = 0.25: binomial 3 sigma ~ 0.004, tolerance 0.01.
    rng = random.Random(42)
    hits = sum(coin(0.25, rng) for _ in range(100_000))
    assert abs(hits / 100_000 - 0.25) < 0.01


def test_triggering_edge_is_collected():
    smp = DegResSampler(d1=1, d2=1, s=4, rng=random.Random(0))
    smp.process_update(StreamUpdate(1, 1))
    assert smp.reservoir == (1,)
    assert smp.finalize() == (1, (1,))


def test_edges_before_trigger_are_not_collected():
    # d1=2, d2=1: the first edge only counts degree; the second triggers
    # admission and is the one collected.
    smp = DegResSampler(d1=2, d2=1, s=4, rng=random.Random(0))
    smp.process_update(StreamUpdate(1, 1))
    assert smp.finalize() is None
    smp.process_update(StreamUpdate(1, 2))
    assert smp.finalize() == (1, (2,))


def test_deletions_rejected():
    smp = DegResSampler(d1=1, d2=1, s=1, rng=random.Random(0))
    with pytest.raises(DeletionUnsupported):
        smp.process_update(StreamUpdate(1, 1, Sign.DELETE))


def test_second_candidate_admitted_half_the_time():
    # s=1 and two candidates: reservoir sampling admits the second with
    # probability 1/2. 1e4 seeds, 3 sigma ~ 0.015, tolerance 0.02.
    admitted = 0
    trials = 10_000
    for seed in range(trials):
        smp = DegResSampler(d1=1, d2=1, s=1, rng=random.Random(seed))
        smp.process_update(StreamUpdate(1, 1))
        smp.process_update(StreamUpdate(2, 1))
        admitted += smp.reservoir == (2,)
    assert abs(admitted / trials - 0.5) < 0.02


def test_star_collected_fully():
    smp = DegResSampler(d1=1, d2=5, s=1, rng=random.Random(3))
    for b in range(1, 6):
        smp.process_update(StreamUpdate(1, b))
    assert smp.finalize() == (1, (1, 2, 3, 4, 5))


def test_fail_when_no_vertex_reaches_target():
    # 100 vertices of degree 1 but d2=2: no size-2 neighbourhood exists.
    smp = DegResSampler(d1=1, d2=2, s=8, rng=random.Random(5))
    for a in range(1, 101):
        smp.process_update(StreamUpdate(a, 1))
    assert smp.finalize() is None


def test_finalize_smallest_center_among_qualifying():
    smp = DegResSampler(d1=1, d2=2, s=8, rng=random.Random(1))
    for a in (7, 4):
        for b in (1, 2):
            smp.process_update(StreamUpdate(a, b))
    assert smp.finalize().center == 4


def test_never_fails_when_reservoir_never_overflows():
    # With at most s candidates, every candidate is stored, so a vertex of
    # degree >= d1 + d2 - 1 guarantees success on any stream order.
    rng = random.Random(17)
    for trial in range(30):
        d1, d2, s = rng.randint(1, 3), rng.randint(1, 4), rng.randint(3, 6)
        updates = []
        heavy = rng.randint(1, 4)
        for b in range(1, d1 + d2):
            updates.append(StreamUpdate(heavy, b))
        for a in range(5, 5 + s - 1):
            for b in range(1, rng.randint(d1, d1 + d2 - 1) + 1):
                updates.append(StreamUpdate(a, b))
        rng.shuffle(updates)
        smp = DegResSampler(d1, d2, s, random.Random(trial))
        for u in updates:
            smp.process_update(u)
        assert smp.candidates <= s
        assert smp.finalize() is not None


def _two_class_stream(n1: int, n2: int, d1: int, d2: int, order_seed: int):
    """n1 vertices reach degree d1, of which n2 reach d1 + d2 - 1."""
    updates = []
    for a in range(1, n1 + 1):
        degree = d1 + d2 - 1 if a <= n2 else d1
        for b in range(1, degree + 1):
            updates.append(StreamUpdate(a, b))
    random.Random(order_seed).shuffle(updates)
    return updates


def test_success_bound_monte_carlo_small():
    # n1=20 candidates, n2=4 heavy, s=6: success >= 1 - (1 - s/n1)**n2.
    n1, n2, s, d1, d2 = 20, 4, 6, 2, 2
    stream = _two_class_stream(n1, n2, d1, d2, order_seed=0)
    bound = 1 - (1 - s / n1) ** n2
    trials = 4000
    wins = 0
    for seed in range(trials):
        smp = DegResSampler(d1, d2, s, random.Random(seed))
        for u in stream:
            smp.process_update(u)
        wins += smp.finalize() is not None
    sigma = math.sqrt(bound * (1 - bound) / trials)
    assert wins / trials >= bound - 3 * sigma


def test_reservoir_uniformity_small():
    # 12 candidates, s=3: inclusion frequency of every vertex is 1/4.
    trials = 20_000
    counts = [0] * 13
    for seed in range(trials):
        smp = DegResSampler(1, 1, 3, random.Random(seed))
        for a in range(1, 13):
            smp.process_update(StreamUpdate(a, 1))
        for a in smp.reservoir:
            counts[a] += 1
    sigma = math.sqrt(0.25 * 0.75 / trials)
    for a in range(1, 13):
        assert abs(counts[a] / trials - 0.25) <= 4 * sigma


@st.composite
def insertion_streams(draw):
    n = draw(st.integers(min_value=1, max_value=10))
    pairs = draw(st.lists(st.tuples(st.integers(1, n), st.integers(1, 30)),
                          min_size=1, max_size=80))
    seen = set()
    updates = []
    for a, b in pairs:
        if (a, b) not in seen:
            seen.add((a, b))
            updates.append(StreamUpdate(a, b))
    d1 = draw(st.integers(min_value=1, max_value=4))
    d2 = draw(st.integers(min_value=1, max_value=4))
    s = draw(st.integers(min_value=1, max_value=5))
    seed = draw(st.integers(min_value=0, max_value=2**32))
    return updates, d1, d2, s, seed


@given(insertion_streams())
@settings(max_examples=80, deadline=None)
def test_reservoir_invariants(data):
    updates, d1, d2, s, seed = data
    smp = DegResSampler(d1, d2, s, random.Random(seed))
    degrees: dict[int, int] = {}
    for u in updates:
        smp.process_update(u)
        degrees[u.a] = degrees.get(u.a, 0) + 1
        assert len(smp.reservoir) <= s
        assert smp.stored_edges() <= s * d2
        for a in smp.reservoir:
            assert smp.collected_count(a) <= min(d2, degrees[a] - d1 + 1)
    assert smp.candidates == sum(1 for v in degrees.values() if v >= d1)
    nb = smp.finalize()
    if nb is not None:
        assert nb.size == d2
        assert nb.center in smp.reservoir


def test_determinism_same_seed_same_outcome():
    stream = _two_class_stream(20, 4, 2, 2, order_seed=3)

    def run(seed):
        smp = DegResSampler(2, 2, 5, random.Random(seed))
        for u in stream:
            smp.process_update(u)
        return smp.reservoir, smp.finalize()

    assert run(99) == run(99)
