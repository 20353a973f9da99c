"""Time the compiled tableau kernels against the pure-Python ones.

Usage: python3 benchmarks/bench_kernels.py [--sizes 16,40,80,130] [--reps 200]

Also times one end-to-end heuristic run with each backend swapped in.
"""

from __future__ import annotations

import argparse
import random
import timeit

from gsforge import _pykernels
from gsforge.graphs import Graph, random_connected_graph
from gsforge.tableau import StabilizerTableau

try:
    from gsforge import _ckernels
except ImportError:
    _ckernels = None


def scrambled(n: int, rng: random.Random) -> StabilizerTableau:
    g = Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                  if rng.random() < 0.3])
    t = StabilizerTableau.from_graph(g)
    for _ in range(4 * n):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            t.cnot(a, b)
        t.apply(rng.choice(("H", "P")), a)
    return t


def time_kernel(mod, name: str, t: StabilizerTableau, reps: int) -> float:
    fn = getattr(mod, name)
    if name == "back_substitute":
        t = t.copy()
        t.rref()

    def once():
        xs, zs, ss = t.xs[:], t.zs[:], t.signs[:]
        if name == "rref":
            fn(xs, zs, ss, t.n)
        elif name == "back_substitute":
            fn(xs, zs, ss, 0, t.n)
        else:
            fn(xs, zs, t.n)

    return min(timeit.repeat(once, number=reps, repeat=3)) / reps


def time_synthesis(backend, n_p: int, seed: int) -> float:
    from gsforge import kernels
    from gsforge.synthesis import heuristics1_synthesize

    saved = (kernels.rref, kernels.back_substitute, kernels.graph_adjacency)
    kernels.rref = backend.rref
    kernels.back_substitute = backend.back_substitute
    kernels.graph_adjacency = backend.graph_adjacency
    try:
        g = random_connected_graph(n_p, 0.5, random.Random(seed))
        return min(timeit.repeat(lambda: heuristics1_synthesize(g), number=1, repeat=3))
    finally:
        kernels.rref, kernels.back_substitute, kernels.graph_adjacency = saved


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="16,40,80,130")
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--synthesis-np", type=int, default=18)
    args = ap.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled kernels are not built; reinstall without GSF_NO_EXT")
    rng = random.Random(args.seed)
    print(f"{'kernel':<16}{'n':>5}{'python us':>12}{'cython us':>12}{'speedup':>9}")
    for n in (int(s) for s in args.sizes.split(",")):
        t = scrambled(n, rng)
        reps = max(5, args.reps * 16 // n)
        for name in ("rref", "back_substitute", "graph_adjacency"):
            py = time_kernel(_pykernels, name, t, reps)
            cy = time_kernel(_ckernels, name, t, reps)
            print(f"{name:<16}{n:>5}{py * 1e6:>12.1f}{cy * 1e6:>12.1f}{py / cy:>8.1f}x")
    py = time_synthesis(_pykernels, args.synthesis_np, args.seed)
    cy = time_synthesis(_ckernels, args.synthesis_np, args.seed)
    print(f"h1 synthesis, n_p={args.synthesis_np}: python {py:.3f}s  cython {cy:.3f}s  "
          f"({py / cy:.1f}x)")


if __name__ == "__main__":
    main()
