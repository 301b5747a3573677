"""Find a frequently-updated entry and prove it, from one pass over a log.

A planted instance hides one A-vertex of degree 64 among 256 vertices of
a bipartite update stream. The search keeps a degree table plus a few
small degree-triggered reservoirs and still certifies ceil(d/alpha)
neighbours of a heavy vertex, using a fraction of the stream's edges.
"""

from feww.core import replay, verify_witness
from feww.generators import gen_planted_star
from feww.insertion_only import InsertionOnlyConfig, run_insertion_only

N, M, D, ALPHA, SEED = 256, 1024, 64, 4, 2026

stream = gen_planted_star(N, M, D, background_degree=3, seed=SEED)
print(f"stream: {len(stream)} insertions over |A|={N}, |B|={M}")

config = InsertionOnlyConfig(n=N, d=D, alpha=ALPHA, seed=SEED)
print(f"threshold d={D}, approximation alpha={ALPHA}: "
      f"must certify >= {config.witness_target} neighbours")
print(f"reservoir size s={config.reservoir_size}, staggered triggers "
      f"{[config.trigger_threshold(i) for i in range(ALPHA)]}")

run = run_insertion_only(config, stream)
assert run.result is not None, "the promise holds, so a run should succeed"
print(f"\nrun {run.winning_run} reports vertex {run.result.center} with "
      f"{run.result.size} witness edges:")
print("  " + " ".join(str(b) for b in run.result.witnesses))

oracle = replay(stream, N, M)
print(f"\noracle check: max degree {oracle.max_degree()}, "
      f"witnesses genuine: {verify_witness(oracle, run.result, config.witness_target)}")

report = run.space_report()
print(f"space: {report.stored_edges} stored edges "
      f"(hard cap {config.edge_bound()}), {report.words} counter words; "
      f"the stream itself had {len(stream)} edges")
