"""Stabilizer simulation of forward circuits."""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from typing import Optional

from gsforge.graphs import Graph
from gsforge.synthesis.circuit import Circuit
from gsforge.tableau import StabilizerTableau

__all__ = ["simulate", "verify_circuit", "ordered_graph"]


def ordered_graph(g: Graph, ordering: Sequence[int]) -> Graph:
    """Relabel so that the ``j``-th emitted photon becomes vertex ``j+1``."""
    perm = [0] * g.n
    for j, label in enumerate(ordering):
        perm[label - 1] = j + 1
    return g.relabel(perm)


def simulate(c: Circuit, outcome: "callable") -> StabilizerTableau:
    """Run ``c`` from |0...0>; ``outcome()`` supplies each random measurement bit."""
    t = StabilizerTableau.zero_state(c.n_qubits, c.n_photons)
    for op in c.ops:
        if op.g == "MZ":
            m, _ = t.measure_z(op.q[0], outcome())
            if m:
                for p, q in op.cond:
                    t.apply(p, q)
        elif op.g == "ResetPlus":
            m, _ = t.measure_z(op.q[0], outcome())
            if m:
                t.pauli_x(op.q[0])
            t.h(op.q[0])
        elif op.g == "TRM":
            raise ValueError("simulate expects a forward circuit")
        else:
            t.apply(op.g, *op.q)
    return t


def _target(g: Graph, ordering: Sequence[int], n_e: int) -> StabilizerTableau:
    return StabilizerTableau.from_graph(ordered_graph(g, ordering), n_e)


def verify_circuit(c: Circuit, g: Graph, ordering: Optional[Sequence[int]] = None,
                   seeds: Iterable[int] = (0, 1, 2)) -> bool:
    """True when every outcome pattern yields the target graph state.

    Patterns tried: all-zero outcomes, all-one outcomes, then one random
    pattern per seed. Emitters must end in ``|0>`` with sign ``+``.
    """
    if c.direction != "forward":
        return False
    if ordering is None:
        ordering = c.ordering
    if list(ordering) != list(c.ordering) or g.n != c.n_photons:
        return False
    try:
        c.check_structure()
    except ValueError:
        return False
    want = _target(g, ordering, c.n_emitters)
    patterns = [lambda: 0, lambda: 1]
    for s in seeds:
        rng = random.Random(s)
        patterns.append(lambda rng=rng: rng.getrandbits(1))
    for pat in patterns:
        try:
            got = simulate(c, pat)
        except (ArithmeticError, IndexError, ValueError):
            return False
        if not got.same_state(want):
            return False
    return True
