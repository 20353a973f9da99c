"""Functional wrappers around single engine steps.

Each takes a tableau whose first ``t.n_photons`` columns are photons (in
emission order) and returns a fresh tableau plus the gates applied, as
``(name, qubits)`` pairs on 0-based columns.
"""

from __future__ import annotations

from typing import Optional

from gsforge.synthesis.engine import Engine, OptimizerOptions, SynthesisError
from gsforge.tableau import StabilizerTableau

__all__ = [
    "time_reversed_measurement",
    "try_free_absorption",
    "disentangle_pair",
    "final_disentanglement",
]


def _engine(t: StabilizerTableau, next_photon: int = -1) -> Engine:
    n_p = t.n_photons
    return Engine(t.copy(), n_p, t.n - n_p, [], 0, next_photon)


def _gates(eng: Engine) -> list[tuple[str, tuple[int, ...]]]:
    return [(op.g, op.q) for op in eng.ops]


def time_reversed_measurement(t: StabilizerTableau, emitter: int, photon: int
                              ) -> tuple[StabilizerTableau, list]:
    """Prepare a decoupled ``emitter`` in |+> and entangle it with ``photon``."""
    eng = _engine(t, photon)
    if emitter < eng.n_p or emitter >= t.n:
        raise ValueError("emitter index out of range")
    rows = [r for r in range(t.n) if t.support(r) & (1 << emitter)]
    if len(rows) != 1 or t.weight(rows[0]) != 1:
        raise SynthesisError(f"emitter {emitter} is not decoupled")
    r = rows[0]
    p = eng.t.pauli(r, emitter)
    if p == "Z":
        eng.gate("H", emitter)
    elif p == "Y":
        eng.gate("Pdag", emitter)
    if eng.t.signs[r]:
        eng.gate("Z", emitter)
    eng.t.cnot(emitter, photon)
    eng.ops.append(_trm_op(emitter, photon))
    return eng.t, _gates(eng)


def _trm_op(emitter: int, photon: int):
    from gsforge.synthesis.circuit import Op
    return Op("TRM", (emitter, photon))


def try_free_absorption(t: StabilizerTableau, photon: int,
                        opts: Optional[OptimizerOptions] = None
                        ) -> Optional[tuple[StabilizerTableau, list]]:
    """Absorbed tableau and gates, or ``None`` when emitter CNOTs would be needed."""
    opts = opts or OptimizerOptions()
    eng = _engine(t, photon)
    eng.t.rref()
    if not eng.try_free(photon, opts.exhaust_free_pa):
        return None
    return eng.t, _gates(eng)


def disentangle_pair(t: StabilizerTableau, e1: int, e2: int
                     ) -> tuple[StabilizerTableau, list]:
    """Decouple one of two emitters sharing a weight-2 emitter-only stabilizer."""
    eng = _engine(t)
    want = (1 << e1) | (1 << e2)
    rows = [r for r in range(t.n) if t.support(r) == want]
    if not rows:
        eng.t.rref()
        eng.t.back_substitute(0)
        rows = [r for r in range(t.n) if eng.t.support(r) == want]
    if not rows:
        raise SynthesisError(f"no weight-2 stabilizer on emitters {e1}, {e2}")
    eng.disentangle_pair(rows[0])
    return eng.t, _gates(eng)


def final_disentanglement(t: StabilizerTableau, opts: Optional[OptimizerOptions] = None
                          ) -> tuple[StabilizerTableau, list]:
    """Disentangle all emitters; photons must already be absorbed."""
    eng = _engine(t)
    if any(t.support(r) & eng.photon_mask and t.weight(r) > 1 for r in range(t.n)):
        raise SynthesisError("photons are still entangled with the emitters")
    eng.final_disentangle(backsub=True if opts is None else True)
    return eng.t, _gates(eng)
