"""Seeded random-graph sweeps comparing optimizers against the naive baseline."""

from __future__ import annotations

import csv
import io
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from gsforge.graphs import Graph, random_connected_graph
from gsforge.synthesis import OPTIMIZERS, OptimizerOptions, verify_circuit

__all__ = ["BenchmarkConfig", "BenchmarkRecord", "run_benchmark", "records_to_csv",
           "aggregate", "CSV_VERSION"]

CSV_VERSION = "gsforge-benchmark v1"


@dataclass
class BenchmarkConfig:
    n_p: list[int]
    samples: int = 10
    p: float = 0.5
    seed: int = 0
    optimizers: list[str] = field(default_factory=lambda: ["naive", "h1"])
    options: dict = field(default_factory=dict)
    timing: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0 < self.p < 1:
            raise ValueError("edge probability must lie in (0, 1)")
        if not self.n_p or min(self.n_p) < 1:
            raise ValueError("n_p values must be positive")
        unknown = [o for o in self.optimizers if o not in OPTIMIZERS]
        if unknown:
            raise ValueError(f"unknown optimizers {unknown}")
        if "naive" not in self.optimizers:
            self.optimizers = ["naive"] + list(self.optimizers)


@dataclass
class BenchmarkRecord:
    graph_id: int
    n_p: int
    n_e: int
    edges: list[tuple[int, int]]
    cnots: dict[str, int]
    seconds: dict[str, float]

    def reduction(self, name: str) -> Optional[float]:
        base = self.cnots["naive"]
        if base == 0:
            return None
        return (base - self.cnots[name]) / base


def _job(args) -> BenchmarkRecord:
    gid, n_p, edges, optimizers, options = args
    g = Graph(n_p, edges)
    opts = OptimizerOptions(**options)
    cnots, secs = {}, {}
    n_e = 0
    for name in optimizers:
        t0 = time.perf_counter()
        res = OPTIMIZERS[name](g, None, opts)
        secs[name] = time.perf_counter() - t0
        if not verify_circuit(res.circuit, g):
            raise RuntimeError(f"graph {gid}: {name} circuit failed verification")
        cnots[name] = res.emitter_cnots
        n_e = res.num_emitters
    return BenchmarkRecord(gid, n_p, n_e, edges, cnots, secs)


def _threads() -> int:
    raw = os.environ.get("GSF_THREADS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def run_benchmark(cfg: BenchmarkConfig) -> list[BenchmarkRecord]:
    rng = random.Random(cfg.seed)
    jobs = []
    gid = 0
    for n_p in cfg.n_p:
        for _ in range(cfg.samples):
            g = random_connected_graph(n_p, cfg.p, rng)
            jobs.append((gid, n_p, g.edges(), list(cfg.optimizers), dict(cfg.options)))
            gid += 1
    workers = min(_threads(), len(jobs))
    if workers <= 1:
        return [_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_job, jobs, chunksize=4))


def records_to_csv(records: list[BenchmarkRecord], optimizers: list[str],
                   timing: bool = False) -> str:
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    head = ["graph_id", "n_p", "n_e", "n_edges"]
    for o in optimizers:
        head += [f"{o}_cnots", f"{o}_reduction"]
        if timing:
            head.append(f"{o}_seconds")
    w.writerow(head)
    for r in records:
        row = [r.graph_id, r.n_p, r.n_e, len(r.edges)]
        for o in optimizers:
            red = r.reduction(o)
            row += [r.cnots[o], "" if red is None else f"{red:.6f}"]
            if timing:
                row.append(f"{r.seconds[o]:.6f}")
        w.writerow(row)
    return buf.getvalue()


def aggregate(records: list[BenchmarkRecord], optimizers: list[str]) -> dict:
    """Mean and max reduction per ``n_p`` and optimizer (naive > 0 only)."""
    out: dict = {}
    by_n: dict[int, list[BenchmarkRecord]] = {}
    for r in records:
        by_n.setdefault(r.n_p, []).append(r)
    for n_p, rs in sorted(by_n.items()):
        entry = {"samples": len(rs)}
        for o in optimizers:
            reds = [x for x in (r.reduction(o) for r in rs) if x is not None]
            entry[o] = {
                "mean_cnots": sum(r.cnots[o] for r in rs) / len(rs),
                "mean_reduction": (sum(reds) / len(reds)) if reds else None,
                "max_reduction": max(reds) if reds else None,
            }
        out[str(n_p)] = entry
    return out


def config_dict(cfg: BenchmarkConfig) -> dict:
    return asdict(cfg)
