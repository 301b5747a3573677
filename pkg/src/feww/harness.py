"""Seeded experiment harness: generate, run, verify, meter, report.

An experiment is a flat key=value config naming a generator, an algorithm
and their parameters. Each trial gets its own seed derived from the
master seed by trial index (splitmix64 mixing, see `feww.seeds`), builds
a fresh instance, runs the algorithm, and replays the same stream through
the exact oracle to verify every reported witness. An unsound witness is
a correctness bug and aborts the experiment.

Space is metered in retained logical items (stored edges, reservoir and
degree-table entries, sketch cells), never process bytes.

The CSV report is byte-stable: identical config and seed give identical
bytes. Wall-clock times are therefore recorded in the per-trial records
but written to the CSV as 0 unless the config sets `timings=1`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    MODE_INSERTION_ONLY,
    StreamUpdate,
    replay,
    verify_witness,
)
from .errors import SpaceBoundViolation, UnsoundWitness
from .generators import (
    gen_amri_instance,
    gen_amri_stream,
    gen_bvl_graph,
    gen_bvl_instance,
    gen_general_star,
    gen_planted_star,
    gen_set_disjointness,
)
from .insertion_deletion import InsDelConfig, run_insertion_deletion
from .insertion_only import InsertionOnlyConfig, run_insertion_only
from .seeds import derive
from .stars import Mode, StarConfig, run_star_detection

ALGORITHMS = ("insertion-only", "insertion-deletion", "star")
GENERATORS = ("planted", "setdisj", "bvl", "amri", "general-star")

CSV_COLUMNS = ("trial", "seed", "succeeded", "witness_count", "sound",
               "stored_edges", "sketch_cells", "wall_ms")


@dataclass
class ExperimentConfig:
    algorithm: str
    generator: str
    n: int
    m: int = 0
    d: int = 1
    alpha: int = 1
    epsilon: float = 1.0
    delta: Optional[float] = None
    background: int = 0
    parties: int = 2
    k: int = 1
    intersecting: bool = True
    trials: int = 1
    seed: int = 0
    out: Optional[str] = None
    timings: bool = False
    mode: str = MODE_INSERTION_ONLY  # star algorithm only

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.algorithm == "star" and self.generator != "general-star":
            raise ValueError("the star algorithm runs on the general-star generator")
        if self.algorithm != "star" and self.generator == "general-star":
            raise ValueError("general-star instances need the star algorithm")

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        mapping = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = line.split("=", 1)
                mapping[key.strip()] = value.strip()
        return cls.from_mapping(mapping)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ExperimentConfig":
        kwargs = {}
        converters = {
            "algorithm": str, "generator": str, "mode": str, "out": str,
            "n": int, "m": int, "d": int, "alpha": int, "background": int,
            "parties": int, "k": int, "trials": int, "seed": int,
            "epsilon": float, "delta": float,
            "intersecting": lambda v: v in ("1", "true", "yes"),
            "timings": lambda v: v in ("1", "true", "yes"),
        }
        for key, value in mapping.items():
            if key not in converters:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[key] = converters[key](value)
        return cls(**kwargs)


@dataclass
class TrialRecord:
    trial: int
    seed: int
    succeeded: bool
    witness_count: int
    sound: bool
    stored_edges: int
    sketch_cells: int
    wall_ms: int

    def csv_row(self, with_timings: bool) -> str:
        wall = self.wall_ms if with_timings else 0
        return (f"{self.trial},{self.seed},{int(self.succeeded)},{self.witness_count},"
                f"{int(self.sound)},{self.stored_edges},{self.sketch_cells},{wall}")


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    summary: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for rec in sorted(self.records, key=lambda r: r.trial):
            lines.append(rec.csv_row(self.config.timings))
        return "\n".join(lines) + "\n"


def _instance_dims(cfg: ExperimentConfig) -> tuple[int, int, int]:
    """(n, m, d) of the bipartite instances a config generates."""
    if cfg.generator == "planted":
        return cfg.n, cfg.m, cfg.d
    if cfg.generator == "setdisj":
        d = cfg.k * cfg.parties
        return cfg.n, d, d
    if cfg.generator == "bvl":
        return cfg.n, 2 * cfg.k * cfg.parties, cfg.k * cfg.parties
    if cfg.generator == "amri":
        return cfg.n, 2 * cfg.d, cfg.d
    raise AssertionError(cfg.generator)


def _build_instance(cfg: ExperimentConfig, trial_seed: int) -> list[StreamUpdate]:
    if cfg.generator == "planted":
        return gen_planted_star(cfg.n, cfg.m, cfg.d, cfg.background, trial_seed)
    if cfg.generator == "setdisj":
        streams = gen_set_disjointness(cfg.parties, cfg.k, cfg.n,
                                       cfg.intersecting, trial_seed)
        return [u for s in streams for u in s]
    if cfg.generator == "bvl":
        inst = gen_bvl_instance(cfg.parties, cfg.n, cfg.k, trial_seed)
        return [u for s in gen_bvl_graph(inst) for u in s]
    if cfg.generator == "amri":
        inst = gen_amri_instance(cfg.n, cfg.d, cfg.alpha, trial_seed)
        return gen_amri_stream(inst, cfg.alpha)
    raise AssertionError(cfg.generator)


def run_trial(cfg: ExperimentConfig, trial: int) -> TrialRecord:
    trial_seed = derive(cfg.seed, trial)
    started = time.perf_counter()
    stored_edges = 0
    sketch_cells = 0
    target = -(-cfg.d // cfg.alpha)

    if cfg.algorithm == "star":
        updates = gen_general_star(cfg.n, cfg.d, trial_seed, cfg.background)
        mode = Mode(cfg.mode)
        star_cfg = StarConfig(n=cfg.n, epsilon=cfg.epsilon, alpha=cfg.alpha,
                              mode=mode, seed=trial_seed, delta=cfg.delta)
        run = run_star_detection(star_cfg, updates)
        result = run.result
        stored_edges = run.stored_edges
        sketch_cells = run.sketch_cells
        oracle_updates = [u for gu in updates
                          for u in (StreamUpdate(gu.u, gu.v, gu.sign),
                                    StreamUpdate(gu.v, gu.u, gu.sign))]
        oracle = replay(oracle_updates, cfg.n, cfg.n)
        target = 1  # any verified star counts; size floors live in the tests
    else:
        n, m, d = _instance_dims(cfg)
        updates = _build_instance(cfg, trial_seed)
        target = -(-d // cfg.alpha)
        if cfg.algorithm == "insertion-only":
            run = run_insertion_only(
                InsertionOnlyConfig(n=n, d=d, alpha=cfg.alpha, seed=trial_seed), updates
            )
            result = run.result
            stored_edges = run.space_report().stored_edges
        else:
            run = run_insertion_deletion(
                InsDelConfig(n=n, m=m, d=d, alpha=cfg.alpha, seed=trial_seed,
                             delta=cfg.delta), updates
            )
            result = run.result
            sketch_cells = run.sketch_cells
        oracle = replay(updates, n, m)

    sound = True
    witness_count = 0
    if result is not None:
        witness_count = result.size
        sound = verify_witness(oracle, result, target)
        if not sound:
            raise UnsoundWitness(
                f"trial {trial} (seed {trial_seed}): center {result.center} "
                f"reported {witness_count} witnesses, oracle disagrees"
            )
    succeeded = result is not None and witness_count >= target and sound
    wall_ms = int(round((time.perf_counter() - started) * 1000))
    return TrialRecord(trial=trial, seed=trial_seed, succeeded=succeeded,
                       witness_count=witness_count, sound=sound,
                       stored_edges=stored_edges, sketch_cells=sketch_cells,
                       wall_ms=wall_ms)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    records = [run_trial(cfg, t) for t in range(cfg.trials)]
    records.sort(key=lambda r: r.trial)
    successes = sum(r.succeeded for r in records)
    summary = {
        "trials": cfg.trials,
        "successes": successes,
        "success_rate": successes / cfg.trials,
        "mean_stored_edges": sum(r.stored_edges for r in records) / cfg.trials,
        "mean_sketch_cells": sum(r.sketch_cells for r in records) / cfg.trials,
    }
    if cfg.algorithm == "insertion-only":
        n, _, d = _instance_dims(cfg)
        summary["edge_bound"] = InsertionOnlyConfig(
            n=n, d=d, alpha=cfg.alpha, seed=0
        ).edge_bound()
    if cfg.algorithm == "insertion-deletion":
        n, m, d = _instance_dims(cfg)
        summary["cell_formula"] = InsDelConfig(
            n=n, m=m, d=d, alpha=cfg.alpha, seed=0, delta=cfg.delta
        ).sketch_cells
    result = ExperimentResult(cfg, records, summary)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(result.csv_text())
    return result


def space_audit(result: ExperimentResult) -> None:
    """Assert the per-trial space metrics against the configured bounds."""
    cfg = result.config
    if cfg.algorithm == "insertion-only":
        bound = result.summary.get("edge_bound")
        if bound is None:
            n, _, d = _instance_dims(cfg)
            bound = InsertionOnlyConfig(n=n, d=d, alpha=cfg.alpha, seed=0).edge_bound()
        for rec in result.records:
            if rec.stored_edges > bound:
                raise SpaceBoundViolation(
                    f"trial {rec.trial}: stored_edges {rec.stored_edges} > bound {bound}"
                )
    elif cfg.algorithm == "insertion-deletion":
        formula = result.summary.get("cell_formula")
        if formula is None:
            return
        for rec in result.records:
            if rec.sketch_cells != formula:
                raise SpaceBoundViolation(
                    f"trial {rec.trial}: sketch_cells {rec.sketch_cells} != formula {formula}"
                )


def summary_text(result: ExperimentResult) -> str:
    parts = [f"trials={result.summary['trials']}",
             f"successes={result.summary['successes']}",
             f"success_rate={result.summary['success_rate']:.6f}",
             f"mean_stored_edges={result.summary['mean_stored_edges']:.1f}",
             f"mean_sketch_cells={result.summary['mean_sketch_cells']:.1f}"]
    if "edge_bound" in result.summary:
        parts.append(f"edge_bound={result.summary['edge_bound']}")
    if "cell_formula" in result.summary:
        parts.append(f"cell_formula={result.summary['cell_formula']}")
    return "summary " + " ".join(parts)
