"""Backward-in-time generation engine.

Photons are absorbed from the last emitted to the first. Columns ``0..n_p-1``
of the working tableau are photons in emission order and ``n_p..`` are
emitters. After photon ``j`` is absorbed its only support is a lone ``±Z_j``
row; every method below preserves that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from gsforge.graphs import Graph, connected_components
from gsforge.synthesis.circuit import Circuit, Op
from gsforge.tableau import StabilizerTableau, num_emitters as _num_emitters

__all__ = [
    "OptimizerOptions",
    "Engine",
    "SynthesisError",
    "BudgetExceeded",
    "PAIR_RULES",
]


class SynthesisError(RuntimeError):
    pass


class BudgetExceeded(SynthesisError):
    pass


@dataclass
class OptimizerOptions:
    backsub_global: bool = False
    exhaust_free_pa: bool = False
    lc_rounds: int = 0
    prune_per_level: Optional[int] = None
    emitter_cutoff: Optional[int] = None
    future_cutoff: Optional[int] = 4
    recurse_further: bool = False
    heuristics1_local_gate_set: str = "full6"
    use_step3: bool = True
    variant_sweep: bool = False
    node_budget: int = 200_000
    time_budget: Optional[float] = None

    def __post_init__(self):
        for name in ("prune_per_level", "emitter_cutoff"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.future_cutoff is not None and self.future_cutoff < 0:
            raise ValueError("future_cutoff must be >= 0")
        if self.lc_rounds < 0:
            raise ValueError("lc_rounds must be >= 0")
        if self.heuristics1_local_gate_set not in ("full6", "reduced4"):
            raise ValueError("local gate set must be 'full6' or 'reduced4'")


# Pauli pair on (e1, e2) -> local gates (name, which) then CNOT (control, target)
# with which/control/target given as 1 or 2.
PAIR_RULES = {
    ("Z", "Z"): ([], (1, 2)),
    ("X", "X"): ([], (1, 2)),
    ("Y", "Z"): ([], (2, 1)),
    ("X", "Z"): ([("H", 2)], (1, 2)),
    ("X", "Y"): ([], (2, 1)),
    ("Y", "Y"): ([("P", 2)], (1, 2)),
}


@dataclass
class Engine:
    """Working state of one synthesis run (cheap to clone for search)."""

    t: StabilizerTableau
    n_p: int
    n_e: int
    ops: list = field(default_factory=list)
    cnots: int = 0
    next_photon: int = -1  # photon currently being absorbed (counts down)
    trace: Optional[list] = None

    @classmethod
    def start(cls, g_ordered: Graph, n_e: Optional[int] = None, trace: bool = False
              ) -> "Engine":
        # a photon can only leave through an emitter, even an isolated one
        need = max(1, _num_emitters(StabilizerTableau.from_graph(g_ordered)))
        if n_e is None:
            n_e = need
        elif n_e < need:
            raise ValueError(f"ordering needs {need} emitters, got {n_e}")
        t = StabilizerTableau.from_graph(g_ordered, n_e)
        return cls(t, g_ordered.n, n_e, [], 0, g_ordered.n - 1, [] if trace else None)

    def clone(self) -> "Engine":
        return Engine(self.t.copy(), self.n_p, self.n_e, self.ops[:], self.cnots,
                      self.next_photon, None if self.trace is None else self.trace[:])

    # -- masks and row queries --------------------------------------------
    @property
    def photon_mask(self) -> int:
        return (1 << self.n_p) - 1

    @property
    def emitter_mask(self) -> int:
        return ((1 << self.n_e) - 1) << self.n_p

    def emitter_weight(self, r: int) -> int:
        return (self.t.support(r) & self.emitter_mask).bit_count()

    def emitters_of(self, r: int) -> list[int]:
        s = self.t.support(r) & self.emitter_mask
        out = []
        while s:
            low = s & -s
            out.append(low.bit_length() - 1)
            s ^= low
        return out

    def photonic_rows(self, j: int) -> list[int]:
        return [r for r in range(self.t.n) if self.t.leftmost(r) == j]

    def emitter_rows(self) -> list[int]:
        pm = self.photon_mask
        return [r for r in range(self.t.n)
                if self.t.support(r) and not self.t.support(r) & pm]

    def entangled_emitter_rows(self) -> list[int]:
        return [r for r in self.emitter_rows() if self.t.weight(r) >= 2]

    # -- gate recording ----------------------------------------------------
    def gate(self, name: str, *q: int) -> None:
        self.t.apply(name, *q)
        self.ops.append(Op(name, tuple(q)))
        if name == "CNOT" and q[0] >= self.n_p and q[1] >= self.n_p:
            self.cnots += 1

    def rotate_to_z(self, q: int, pauli: str) -> None:
        if pauli == "X":
            self.gate("H", q)
        elif pauli == "Y":
            self.gate("Pdag", q)
            self.gate("H", q)

    def rotate_row_to_z(self, r: int, qubits: list[int]) -> None:
        for q in qubits:
            self.rotate_to_z(q, self.t.pauli(r, q))

    def clear_column(self, r: int, q: int) -> None:
        """Row ``r`` is ``±Z_q``: remove qubit ``q`` from every other row."""
        t = self.t
        b = 1 << q
        for k in range(t.n):
            if k != r and t.zs[k] & b:
                t.rowsum(k, r)

    def decouple_single(self, r: int) -> None:
        """Row ``r`` has weight one; clear its qubit from the other rows."""
        t = self.t
        q = t.leftmost(r)
        b = 1 << q
        if t.xs[r] & b:
            # commuting rows carry the same Pauli or identity on q
            for k in range(t.n):
                if k != r and (t.support(k) & b):
                    t.rowsum(k, r)
        else:
            self.clear_column(r, q)

    # -- primitives ----------------------------------------------------------
    def fan_in(self, r: int, target: int) -> None:
        """Rotate row ``r``'s emitters to Z and merge them onto ``target``."""
        ems = self.emitters_of(r)
        if target not in ems:
            raise SynthesisError(f"emitter {target} not in row {r}")
        self.rotate_row_to_z(r, ems)
        for e in ems:
            if e != target:
                self.gate("CNOT", e, target)

    def absorb(self, r: int, j: int) -> None:
        """Absorb photon ``j`` with row ``r`` (emitter weight at most one)."""
        ems = self.emitters_of(r)
        if len(ems) > 1 or self.t.leftmost(r) != j:
            raise SynthesisError("row cannot absorb the photon without emitter CNOTs")
        if self.t.support(r) & self.photon_mask & ~(1 << j):
            raise SynthesisError("absorption row touches other photons")
        if ems:
            self.rotate_to_z(j, self.t.pauli(r, j))
            e = ems[0]
            self.rotate_to_z(e, self.t.pauli(r, e))
            self.gate("CNOT", e, j)
        else:
            self._emit_product_photon(r, j)
        self.clear_column(r, j)
        if self.trace is not None:
            self.trace.append(self.snapshot())

    def _emit_product_photon(self, r: int, j: int) -> None:
        """Photon ``j`` is in a product state (row ``r``); give it an emission CNOT
        that leaves the state unchanged."""
        t = self.t
        spare = [k for k in self.emitter_rows() if t.weight(k) == 1]
        if spare:
            # control in a Z eigenstate, target in |0>: the CNOT acts trivially
            self.rotate_to_z(j, t.pauli(r, j))
            k = spare[0]
            e = t.leftmost(k)
            self.rotate_to_z(e, t.pauli(k, e))
            self.clear_column(k, e)
            self.gate("CNOT", e, j)
            for other in range(t.n):
                if other != k and t.zs[other] >> e & 1:
                    t.rowsum(other, k)
            return
        # target in |+>: the CNOT acts trivially whatever the control holds
        p = t.pauli(r, j)
        if p == "Z":
            self.gate("H", j)
        elif p == "Y":
            self.gate("Pdag", j)
        if t.signs[r]:
            self.gate("Z", j)
        e = self.n_p
        self.gate("CNOT", e, j)
        for other in range(t.n):
            if other != r and t.xs[other] >> j & 1:
                t.rowsum(other, r)
        self.gate("H", j)

    def decouple_emitter_row(self, r: int) -> int:
        """Reduce an emitter-only row to one qubit (lowest emitter kept)."""
        ems = self.emitters_of(r)
        keep = ems[0]
        if len(ems) > 1:
            self.fan_in(r, keep)
        self.decouple_single(r)
        return keep

    def trm(self, j: int) -> int:
        """Time-reversed measurement feeding photon ``j``; returns the emitter."""
        rows = self.emitter_rows()
        if not rows:
            raise SynthesisError("no emitter available for a time-reversed measurement")
        r = min(rows, key=lambda k: (self.t.weight(k), k))
        mu = self.decouple_emitter_row(r)
        p = self.t.pauli(r, mu)
        if p == "Z":
            self.gate("H", mu)
        elif p == "Y":
            self.gate("Pdag", mu)
        if self.t.signs[r]:
            self.gate("Z", mu)
        self.t.cnot(mu, j)
        self.ops.append(Op("TRM", (mu, j)))
        return mu

    def disentangle_pair(self, r: int) -> None:
        """Apply the matching table rule to a weight-2 emitter-only row."""
        e1, e2 = self.emitters_of(r)
        pair = (self.t.pauli(r, e1), self.t.pauli(r, e2))
        if pair not in PAIR_RULES:
            swapped = (pair[1], pair[0])
            if swapped not in PAIR_RULES:
                raise SynthesisError(f"no disentangling rule for {pair}")
            e1, e2, pair = e2, e1, swapped
        locs, (c, tgt) = PAIR_RULES[pair]
        q = {1: e1, 2: e2}
        for name, which in locs:
            self.gate(name, q[which])
        self.gate("CNOT", q[c], q[tgt])
        if self.t.weight(r) != 1:
            raise SynthesisError("disentangling rule left the row entangled")
        self.decouple_single(r)

    def try_free(self, j: int, exhaust: bool) -> bool:
        """Absorb photon ``j`` without emitter CNOTs if the cascade allows it."""
        t = self.t
        for attempt in range(2 if exhaust else 1):
            if attempt == 1:
                prow = self.photonic_rows(j)
                t.back_substitute(min(prow) if prow else 0)
            prow = self.photonic_rows(j)
            for r in prow:
                if self.emitter_weight(r) <= 1:
                    self.absorb(r, j)
                    return True
            em = self.emitter_mask
            if len(prow) == 2:
                a, b = prow
                if (((t.xs[a] ^ t.xs[b]) | (t.zs[a] ^ t.zs[b])) & em).bit_count() <= 1:
                    t.rowsum(a, b)
                    self.absorb(a, j)
                    return True
            for s in self.emitter_rows():
                for r in prow:
                    if (((t.xs[r] ^ t.xs[s]) | (t.zs[r] ^ t.zs[s])) & em).bit_count() <= 1:
                        t.rowsum(r, s)
                        self.absorb(r, j)
                        return True
        return False

    def prepare(self, j: int, opts: OptimizerOptions) -> bool:
        """Echelon form, TRM if needed, then the free cascade for photon ``j``."""
        self.next_photon = j
        self.t.rref()
        if not self.photonic_rows(j):
            self.trm(j)
            self.t.rref()
        if opts.backsub_global:
            self.t.back_substitute(0)
        return self.try_free(j, opts.exhaust_free_pa)

    def min_weight_photonic_row(self, j: int) -> int:
        rows = self.photonic_rows(j)
        return min(rows, key=lambda r: (self.emitter_weight(r), r))

    # -- finish --------------------------------------------------------------
    def final_disentangle(self, backsub: bool = True) -> int:
        """Disentangle the emitters once every photon is absorbed."""
        before = self.cnots
        for _ in range(4 * self.n_e * self.n_e + 8):
            self.t.rref()
            if backsub:
                self.t.back_substitute(0)
            rows = self.entangled_emitter_rows()
            if not rows:
                break
            r = min(rows, key=lambda k: (self.t.weight(k), k))
            while self.t.weight(r) > 1:
                ems = self.emitters_of(r)
                self.rotate_row_to_z(r, ems[:2])
                self.gate("CNOT", ems[0], ems[1])
            self.decouple_single(r)
        else:
            raise SynthesisError("emitter disentanglement did not terminate")
        return self.cnots - before

    def cleanup(self) -> None:
        """Bring every row to a lone ``+Z`` on its own qubit."""
        t = self.t
        t.rref()
        for r in range(t.n):
            if t.weight(r) != 1:
                raise SynthesisError("state is not a product state at cleanup")
        for r in range(t.n):
            q = t.leftmost(r)
            self.rotate_to_z(q, t.pauli(r, q))
            if t.signs[r]:
                self.gate("X", q)

    # -- observation ------------------------------------------------------------
    def snapshot(self) -> Graph:
        return self.t.graph_form()[0]

    def component_count(self) -> int:
        return len(connected_components(self.t.graph_form()[0]))

    def edge_count(self) -> int:
        return self.t.graph_form()[0].num_edges

    def circuit(self, ordering: list[int]) -> Circuit:
        return Circuit(self.n_p, self.n_e, list(ordering), list(self.ops), "time-reversed")
