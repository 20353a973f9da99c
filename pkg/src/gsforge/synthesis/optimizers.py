"""Absorption policies and the public synthesis entry points."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from itertools import combinations, permutations
from typing import Callable, Optional, Sequence

from gsforge import kernels
from gsforge.graphs import Graph, _components_rows
from gsforge.synthesis.circuit import Circuit, reverse_circuit
from gsforge.synthesis.engine import BudgetExceeded, Engine, OptimizerOptions, SynthesisError
from gsforge.synthesis.verify import ordered_graph, verify_circuit
from gsforge.tableau import StabilizerTableau

__all__ = [
    "SynthesisResult",
    "naive_synthesize",
    "heuristics1_synthesize",
    "heuristics2_synthesize",
    "brute_force_synthesize",
    "synthesize",
    "OPTIMIZERS",
]

LOCAL_SEQS = {
    "full6": ((), ("H",), ("P",), ("H", "P"), ("P", "H"), ("H", "P", "H")),
    "reduced4": ((), ("H",), ("P",), ("P", "H")),
}


@dataclass
class SynthesisResult:
    circuit: Circuit
    time_reversed: Circuit
    emitter_cnots: int
    num_emitters: int
    trace: Optional[list] = None
    optimizer: str = ""


Policy = Callable[[Engine, int, OptimizerOptions], None]


# ---------------------------------------------------------------- helpers

def _live_view(eng: Engine, t: Optional[StabilizerTableau] = None) -> StabilizerTableau:
    """Tableau restricted to qubits not yet absorbed (photons ``<= j`` and emitters)."""
    t = eng.t if t is None else t
    j = eng.next_photon
    if j + 1 >= eng.n_p:
        return t
    keep = j + 1
    low = (1 << keep) - 1
    shift = eng.n_p - keep
    dead = ((1 << eng.n_p) - 1) & ~low
    xs, zs, ss = [], [], []
    for x, z, s in zip(t.xs, t.zs, t.signs):
        if (x | z) & dead:
            continue
        xs.append((x & low) | ((x >> eng.n_p) << keep))
        zs.append((z & low) | ((z >> eng.n_p) << keep))
        ss.append(s)
    return StabilizerTableau(t.n - shift, xs, zs, ss)


def _live_rows(eng: Engine, t: Optional[StabilizerTableau] = None) -> list[int]:
    return _live_view(eng, t).graph_adjacency()


def _components(eng: Engine, t: Optional[StabilizerTableau] = None) -> int:
    return len(_components_rows(_live_rows(eng, t)))


def _edges(eng: Engine, t: Optional[StabilizerTableau] = None) -> int:
    return sum(r.bit_count() for r in _live_rows(eng, t)) // 2


def naive_policy(eng: Engine, j: int, opts: OptimizerOptions) -> None:
    r = eng.min_weight_photonic_row(j)
    target = eng.emitters_of(r)[0]
    eng.fan_in(r, target)
    eng.absorb(r, j)


def _step1(eng: Engine, j: int, opts: OptimizerOptions) -> bool:
    """Free emitters through weight-2 emitter-only rows; True once ``j`` is absorbed."""
    while True:
        eng.t.back_substitute(0)
        pairs = [r for r in eng.emitter_rows() if eng.t.weight(r) == 2]
        if not pairs:
            return False
        eng.disentangle_pair(pairs[0])
        eng.t.rref()
        if eng.try_free(j, opts.exhaust_free_pa):
            return True


def _local_bits(xs: list[int], zs: list[int], seq, q: int) -> None:
    """Apply a local gate sequence to the X/Z bits of column ``q`` (phases dropped)."""
    b = 1 << q
    for name in seq:
        for r in range(len(xs)):
            if name == "H":
                if (xs[r] ^ zs[r]) & b:
                    xs[r] ^= b
                    zs[r] ^= b
            elif xs[r] & b:  # P and Pdag act alike on the bits
                zs[r] ^= b


def _step3(eng: Engine, j: int, opts: OptimizerOptions) -> bool:
    """Commit the first local-gates+CNOT choice that splits off a component."""
    r = eng.min_weight_photonic_row(j)
    ems = eng.emitters_of(r)
    if eng.n_p + eng.n_e >= 30:
        ems = ems[:max(2, math.ceil(len(ems) / 3))]
    if len(ems) < 2:
        return False
    seqs = LOCAL_SEQS[opts.heuristics1_local_gate_set]
    view = _live_view(eng)
    shift = eng.t.n - view.n  # emitter columns move left by the absorbed photons
    base = len(_components_rows(view.graph_adjacency()))
    for a, b in combinations(ems, 2):
        va, vb = a - shift, b - shift
        for sa in seqs:
            for sb in seqs:
                xs0, zs0 = view.xs[:], view.zs[:]
                _local_bits(xs0, zs0, sa, va)
                _local_bits(xs0, zs0, sb, vb)
                for c, tg in ((a, b), (b, a)):
                    bc, bt = 1 << (c - shift), 1 << (tg - shift)
                    xs, zs = xs0[:], zs0[:]
                    for k in range(len(xs)):
                        if xs[k] & bc:
                            xs[k] ^= bt
                        if zs[k] & bt:
                            zs[k] ^= bc
                    if len(_components_rows(kernels.graph_adjacency(xs, zs, view.n))) > base:
                        for name in sa:
                            eng.gate(name, a)
                        for name in sb:
                            eng.gate(name, b)
                        eng.gate("CNOT", c, tg)
                        return True
    return False


def _fan_edges(eng: Engine, r: int, target: int) -> int:
    trial = eng.clone()
    trial.fan_in(r, target)
    return _edges(trial)


def _step4(eng: Engine, j: int, opts: OptimizerOptions) -> None:
    r = eng.min_weight_photonic_row(j)
    cands = eng.emitters_of(r)
    best = min(cands, key=lambda c: (_fan_edges(eng, r, c), c))
    eng.fan_in(r, best)
    eng.absorb(r, j)


def _h1_reduce(eng: Engine, j: int, opts: OptimizerOptions, use_step3: bool) -> bool:
    """Steps 1 and 3 of heuristic #1; True when photon ``j`` got absorbed."""
    for _ in range(2 * eng.n_e + 2):
        if _step1(eng, j, opts):
            return True
        if not (use_step3 and _step3(eng, j, opts)):
            return False
        eng.t.rref()
        if eng.try_free(j, opts.exhaust_free_pa):
            return True
    return False


def h1_policy(eng: Engine, j: int, opts: OptimizerOptions) -> None:
    if _h1_reduce(eng, j, opts, True):
        return
    _step4(eng, j, opts)


def _advance(eng: Engine, photons: int, opts: OptimizerOptions, policy: Policy) -> None:
    """Absorb up to ``photons`` further photons (all remaining if ``None``)."""
    j = eng.next_photon - 1
    done = 0
    while j >= 0 and (photons is None or done < photons):
        if not eng.prepare(j, opts):
            policy(eng, j, opts)
        j -= 1
        done += 1
    if j < 0:
        eng.next_photon = -1
        eng.final_disentangle()


def make_h2_policy(depth: int = 0) -> Policy:
    def h2_policy(eng: Engine, j: int, opts: OptimizerOptions) -> None:
        if _h1_reduce(eng, j, opts, opts.use_step3):
            return
        r = eng.min_weight_photonic_row(j)
        cands = eng.emitters_of(r)
        if opts.emitter_cutoff is not None:
            cands = cands[:opts.emitter_cutoff]
        if opts.future_cutoff == 0 or len(cands) == 1:
            choice = cands[0]
        else:
            consumed = eng.n_p - j
            nested = (make_h2_policy(depth + 1)
                      if opts.recurse_further and consumed < eng.n_p / 2 else h1_policy)
            scores = []
            for c in cands:
                trial = eng.clone()
                trial.trace = None
                trial.fan_in(r, c)
                trial.absorb(r, j)
                _advance(trial, opts.future_cutoff, opts, nested)
                scores.append(trial.cnots)
            choice = cands[scores.index(min(scores))]
        eng.fan_in(r, choice)
        eng.absorb(r, j)
    return h2_policy


# ---------------------------------------------------------------- pipeline

def _prepare_inputs(g: Graph, ordering: Optional[Sequence[int]]) -> list[int]:
    if ordering is None:
        return list(range(1, g.n + 1))
    ordering = list(ordering)
    if sorted(ordering) != list(range(1, g.n + 1)):
        raise ValueError("ordering must be a permutation of 1..n")
    return ordering


def _finish(eng: Engine, g: Graph, ordering: list[int], name: str, check: bool
            ) -> SynthesisResult:
    eng.cleanup()
    back = eng.circuit(ordering)
    fwd = reverse_circuit(back)
    if check and not verify_circuit(fwd, g, ordering):
        raise SynthesisError(f"{name}: synthesized circuit failed verification")
    return SynthesisResult(fwd, back, fwd.emitter_cnots, eng.n_e, eng.trace, name)


def _run(g: Graph, ordering, opts: OptimizerOptions, policy: Policy, name: str,
         trace: bool, check: bool) -> SynthesisResult:
    ordering = _prepare_inputs(g, ordering)
    eng = Engine.start(ordered_graph(g, ordering), trace=trace)
    eng.next_photon = g.n
    _advance(eng, None, opts, policy)
    return _finish(eng, g, ordering, name, check)


def _sweep(fn, g, ordering, opts, trace, check):
    best = None
    for bs, ex in ((False, False), (True, False), (False, True)):
        res = fn(g, ordering, replace(opts, backsub_global=bs, exhaust_free_pa=ex,
                                      variant_sweep=False), trace=trace, check=check)
        if best is None or res.emitter_cnots < best.emitter_cnots:
            best = res
    return best


def naive_synthesize(g: Graph, ordering=None, opts: Optional[OptimizerOptions] = None,
                     trace: bool = False, check: bool = True) -> SynthesisResult:
    """Baseline: free absorption when possible, else fan emitters onto the first one."""
    opts = opts or OptimizerOptions()
    return _run(g, ordering, opts, naive_policy, "naive", trace, check)


def heuristics1_synthesize(g: Graph, ordering=None, opts: Optional[OptimizerOptions] = None,
                           trace: bool = False, check: bool = True) -> SynthesisResult:
    """Pair disentangling, component-splitting search, then the edge-minimizing fan."""
    opts = opts or OptimizerOptions()
    if opts.variant_sweep:
        return _sweep(heuristics1_synthesize, g, ordering, opts, trace, check)
    return _run(g, ordering, opts, h1_policy, "h1", trace, check)


def heuristics2_synthesize(g: Graph, ordering=None, opts: Optional[OptimizerOptions] = None,
                           trace: bool = False, check: bool = True) -> SynthesisResult:
    """Heuristic #1 with a lookahead over candidate absorbing emitters."""
    opts = opts or OptimizerOptions()
    if opts.variant_sweep:
        return _sweep(heuristics2_synthesize, g, ordering, opts, trace, check)
    return _run(g, ordering, opts, make_h2_policy(), "h2", trace, check)


# ---------------------------------------------------------------- brute force

def _lc_variant(eng: Engine, v: int) -> Optional[Engine]:
    """Clone with local gates that complement the current graph form about ``v``."""
    view_cols = [q for q in range(eng.t.n) if not (eng.next_photon < q < eng.n_p)]
    view = _live_view(eng)
    g, ops = view.graph_form()
    if v not in view_cols:
        return None
    vi = view_cols.index(v)
    nb = g.neighbors(vi + 1)
    if len(nb) < 2:
        return None
    out = eng.clone()
    for name, q in ops:
        out.gate(name, view_cols[q])
    # |G> -> |G*v>: sqrt(-iX) on v, sqrt(iZ) on its neighbours
    out.gate("H", v)
    out.gate("P", v)
    out.gate("H", v)
    for w in nb:
        out.gate("Pdag", view_cols[w - 1])
    return out


def _branches(eng: Engine, j: int, bound: Optional[int] = None) -> list[Engine]:
    """Every single-fan absorption of photon ``j`` reachable from ``eng``.

    A fan over ``w`` emitters costs ``w - 1`` CNOTs, so branches that would
    reach ``bound`` are skipped before they are built.
    """
    out = []
    t = eng.t
    prow = eng.photonic_rows(j)
    cands: list[tuple[str, int, int]] = [("row", r, -1) for r in prow]
    if len(prow) == 2:
        cands.append(("pair", prow[0], prow[1]))
    for s in eng.emitter_rows():
        if t.weight(s) >= 2:
            for r in prow:
                cands.append(("mix", r, s))
    emask = eng.emitter_mask
    for kind, r, other in cands:
        sup = t.support(r) if kind == "row" else (
            (t.xs[r] ^ t.xs[other]) | (t.zs[r] ^ t.zs[other]))
        if sup & -sup != 1 << j:
            continue
        if bound is not None and eng.cnots + max(0, (sup & emask).bit_count() - 1) >= bound:
            continue
        base = eng.clone()
        base.trace = None
        if kind != "row":
            base.t.rowsum(r, other)
        ems = base.emitters_of(r)
        if len(ems) <= 1:
            base.absorb(r, j)
            out.append(base)
            continue
        for c in ems:
            b = base.clone()
            b.fan_in(r, c)
            b.absorb(r, j)
            out.append(b)
    return out


def _state_key(eng: Engine, live: int) -> tuple:
    """Dedup key up to local Cliffords and emitter relabelling.

    ``live`` photons (``0..live-1``) are still unabsorbed. Emitters are
    ordered by a refined invariant (photon neighbourhood, then neighbour
    labels); remaining ties take the smallest emitter-emitter adjacency over
    the permutations inside each tie group.
    """
    adj = eng.t.graph_adjacency()
    pmask = (1 << live) - 1
    ems = range(eng.n_p, eng.t.n)
    emask = eng.emitter_mask
    label = {e: adj[e] & pmask for e in ems}
    for _ in range(2):
        label = {e: (label[e], tuple(sorted(label[f] for f in ems if adj[e] >> f & 1)))
                 for e in ems}
    groups: dict = {}
    for e in ems:
        groups.setdefault(label[e], []).append(e)
    keys = sorted(groups)
    orders = [[]]
    for k in keys:
        grp = groups[k]
        if len(grp) == 1 or not any(adj[e] & emask for e in grp):
            orders = [o + grp for o in orders]
        else:
            orders = [o + list(p) for o in orders for p in permutations(grp)]
    best = None
    for order in orders:
        code = 0
        for a in order:
            row = adj[a]
            for b in order:
                code = (code << 1) | (row >> b & 1)
        if best is None or code < best:
            best = code
    photon_part = tuple(adj[p] & pmask for p in range(live))
    return photon_part, tuple(k for k in keys for _ in groups[k]), best


def brute_force_synthesize(g: Graph, ordering=None, opts: Optional[OptimizerOptions] = None,
                           trace: bool = False, check: bool = True) -> SynthesisResult:
    """Level-by-level tree search over absorption choices (optionally with LC rounds)."""
    opts = opts or OptimizerOptions()
    ordering = _prepare_inputs(g, ordering)
    root = Engine.start(ordered_graph(g, ordering), trace=trace)
    # the better heuristic result bounds the search: costs only grow, so any
    # branch already at that cost can no longer improve on it
    plain = replace(opts, variant_sweep=False)
    incumbent = min((heuristics1_synthesize(g, ordering, plain, check=False),
                     heuristics2_synthesize(g, ordering, plain, check=False)),
                    key=lambda res: res.emitter_cnots)
    bound = incumbent.emitter_cnots
    deadline = None if opts.time_budget is None else time.monotonic() + opts.time_budget
    nodes = 0
    level = [root]
    for j in range(g.n - 1, -1, -1):
        nxt: dict[tuple, Engine] = {}
        for eng in level:
            nodes += 1
            if nodes > opts.node_budget or (deadline and time.monotonic() > deadline):
                raise BudgetExceeded("brute-force search budget exhausted")
            if eng.prepare(j, opts):
                kids = [eng]
            else:
                variants = [eng]
                frontier = [eng]
                for _ in range(opts.lc_rounds):
                    new = []
                    for base in frontier:
                        allowed = list(range(j + 1)) + list(range(eng.n_p, eng.t.n))
                        for v in allowed:
                            var = _lc_variant(base, v)
                            if var is not None:
                                var.t.rref()
                                new.append(var)
                    variants += new
                    frontier = new
                kids = []
                for var in variants:
                    kids += _branches(var, j, bound)
            for k in kids:
                if k.cnots >= bound:
                    continue
                # states that agree up to local Cliffords share every future cost
                key = _state_key(k, j)
                old = nxt.get(key)
                if old is None or k.cnots < old.cnots:
                    nxt[key] = k
        level = sorted(nxt.values(), key=lambda e: e.cnots)
        if opts.prune_per_level is not None:
            level = level[:opts.prune_per_level]
    best = None
    for eng in level:
        eng.next_photon = -1
        eng.final_disentangle()
        if best is None or eng.cnots < best.cnots:
            best = eng
    if best is None or best.cnots >= bound:
        if check and not verify_circuit(incumbent.circuit, g, ordering):
            raise SynthesisError("brute: synthesized circuit failed verification")
        return replace(incumbent, optimizer="brute", trace=[] if trace else None)
    return _finish(best, g, ordering, "brute", check)


OPTIMIZERS = {
    "naive": naive_synthesize,
    "h1": heuristics1_synthesize,
    "h2": heuristics2_synthesize,
    "brute": brute_force_synthesize,
}


def synthesize(g: Graph, ordering=None, optimizer: str = "h1",
               opts: Optional[OptimizerOptions] = None, **kw) -> SynthesisResult:
    try:
        fn = OPTIMIZERS[optimizer]
    except KeyError:
        raise ValueError(f"unknown optimizer {optimizer!r}") from None
    return fn(g, ordering, opts, **kw)
