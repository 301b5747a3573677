"""The adversarial instance families, and what makes each one hard.

* Set-disjointness graphs: the max degree is either exactly k or exactly
  k*p, so any algorithm certifying more than k neighbours decides a
  communication problem whose answer costs Omega(n/p^2) bits to carry.
* Bit-vector-learning graphs: witness edges ARE payload bits; a good
  approximation decodes more bits of a hidden string than any single
  party ever held.
* Augmented-matrix-row-index streams: deletions erase everything except
  one hidden matrix row, so an insertion-deletion search is forced to
  reconstruct that row's contents.
"""

from feww.core import Neighbourhood, replay
from feww.generators import (
    bvl_reference_instance,
    decode_bvl_witnesses,
    gen_amri_instance,
    gen_amri_stream,
    gen_bvl_graph,
    gen_set_disjointness,
)
from feww.insertion_deletion import InsDelConfig, run_insertion_deletion

print("-- set-disjointness graphs " + "-" * 40)
P, K, UNIVERSE = 3, 4, 60
for intersecting in (False, True):
    streams = gen_set_disjointness(P, K, UNIVERSE, intersecting, seed=1)
    g = replay([u for s in streams for u in s], UNIVERSE, K * P)
    kind = "uniquely intersecting" if intersecting else "pairwise disjoint"
    print(f"  {kind:22s} -> max degree {g.max_degree():2d} "
          f"(k={K}, k*p={K * P})")

print("\n-- bit-vector-learning graphs " + "-" * 37)
inst = bvl_reference_instance()
g = replay([u for s in gen_bvl_graph(inst) for u in s], inst.n, inst.columns)
nb = g.exact_max_neighbourhood()
idx, bits = decode_bvl_witnesses(nb, inst.k, inst.p)
print(f"  3 parties hold 5-bit strings for nested index sets; index {idx} "
      f"is held by all")
print(f"  its {nb.size} witness edges decode to: "
      + "".join(str(b) for _, b in bits))
print(f"  ground truth concatenation:           {inst.concatenated(idx)}")
partial = Neighbourhood(idx, nb.witnesses[:6])
_, some = decode_bvl_witnesses(partial, inst.k, inst.p)
print(f"  even {len(some)} witnesses already reveal {len(some)} distinct bits "
      "- more than one party's share")

print("\n-- augmented-matrix-row-index streams " + "-" * 29)
N, D, ALPHA = 12, 8, 2
inst2 = gen_amri_instance(N, D, ALPHA, seed=4)
stream = gen_amri_stream(inst2, ALPHA)
g2 = replay(stream, N, 2 * D)
inserts = sum(1 for u in stream if u.sign.value == "I")
print(f"  {inserts} insertions, then {len(stream) - inserts} deletions wipe "
      f"all rows except row {inst2.target_row}")
print("  surviving row degrees:",
      [g2.degree(i) for i in range(1, N + 1)])
cfg = InsDelConfig(n=N, m=2 * D, d=D, alpha=ALPHA, seed=9, delta=1e-6)
run = run_insertion_deletion(cfg, stream)
print(f"  the search has no choice: it reports row {run.result.center} "
      f"with {run.result.size} of its entries")
