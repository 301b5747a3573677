"""Witness search that survives deletions.

Edges come and go: a burst of follows is mostly retracted later, while
one account quietly accumulates a real following. Linear sketches only
ever see the net vector, so the churn costs nothing and the surviving
heavy vertex is still found and certified.
"""

import random

from feww.core import Sign, StreamUpdate, replay, verify_witness
from feww.insertion_deletion import InsDelConfig, run_insertion_deletion

N, M, D, ALPHA, SEED = 100, 32, 32, 4, 7

rng = random.Random(SEED)
heavy = rng.randint(1, N)
stream = [StreamUpdate(heavy, b) for b in range(1, D + 1)]

# noisy churn: 64 edges inserted and later deleted again
churn = [(rng.randint(1, N), rng.randint(1, M)) for _ in range(200)]
churn = list(dict.fromkeys((a, b) for a, b in churn if a != heavy))[:64]
stream += [StreamUpdate(a, b) for a, b in churn]
rng.shuffle(stream)
stream += [StreamUpdate(a, b, Sign.DELETE) for a, b in churn]

config = InsDelConfig(n=N, m=M, d=D, alpha=ALPHA, seed=SEED, delta=1e-6)
s_v, k_a, k_e = (config.vertex_sample_size, config.samplers_per_vertex,
                 config.edge_samplers)
print(f"stream: {len(stream)} updates ({len(churn)} churn edges deleted again)")
print(f"samplers: |A'|={s_v} vertices x {k_a} each, plus {k_e} edge samplers "
      f"({config.sketch_cells} cells total)")

run = run_insertion_deletion(config, stream)
assert run.result is not None
print(f"\nreported vertex {run.result.center} (planted {heavy}) with "
      f"{run.result.size} witnesses, need >= {config.witness_target}")

oracle = replay(stream, N, M)
print(f"final graph: {oracle.edge_count} edges, max degree {oracle.max_degree()}")
print(f"oracle accepts the witnesses: "
      f"{verify_witness(oracle, run.result, config.witness_target)}")
print("every witness survived the deletions: "
      f"{set(run.result.witnesses) <= oracle.neighbours(run.result.center)}")
