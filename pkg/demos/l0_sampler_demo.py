"""What an l0 sampler does, in three vignettes.

1. Uniformity: fresh sketches of the same 8-coordinate support sample
   each member about equally often.
2. Cancellation: insert-then-delete leaves the sketch cell-for-cell equal
   to a fresh one; deletions genuinely erase.
3. Linearity: sketch two halves of a stream separately, merge, and the
   cells match the single-pass sketch exactly, so sharded processing is
   safe.
"""

from collections import Counter

from feww.errors import SketchFailure
from feww.l0 import L0Sketch

DIM, DELTA = 64, 0.01
SUPPORT = [4, 9, 17, 23, 31, 40, 52, 60]

counts = Counter()
fails = 0
for seed in range(4000):
    sk = L0Sketch(DIM, delta=DELTA, seed=seed)
    for c in SUPPORT:
        sk.update(c, +1)
    try:
        counts[sk.sample()] += 1
    except SketchFailure:
        fails += 1
print("draw frequencies over 4000 fresh sketches (ideal 0.125):")
for c in SUPPORT:
    bar = "#" * round(400 * counts[c] / sum(counts.values()))
    print(f"  coord {c:2d}: {counts[c] / sum(counts.values()):.4f} {bar}")
print(f"sampler failures: {fails} (each sketch tolerates delta={DELTA})")

sk = L0Sketch(DIM, delta=DELTA, seed=99)
for c in SUPPORT:
    sk.update(c, +1)
for c in SUPPORT:
    sk.update(c, -1)
print(f"\nafter deleting everything: sample() -> {sk.sample()}, "
      f"cells == fresh sketch: {sk == L0Sketch(DIM, delta=DELTA, seed=99)}")

ops = [(c, +1) for c in SUPPORT] + [(9, -1), (40, -1)]
whole = L0Sketch(DIM, delta=DELTA, seed=5)
left = L0Sketch(DIM, delta=DELTA, seed=5)
right = L0Sketch(DIM, delta=DELTA, seed=5)
for i, (c, d) in enumerate(ops):
    whole.update(c, d)
    (left if i % 2 == 0 else right).update(c, d)
merged = left.merge(right)
print(f"\nsharded halves merge back to the one-pass sketch: {merged == whole}")
print(f"a draw from the merged sketch: {merged.sample()} "
      f"(support is now {sorted(set(SUPPORT) - {9, 40})})")
