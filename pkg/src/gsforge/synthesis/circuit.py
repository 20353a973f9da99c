"""Circuit container, JSON codec, text rendering and time reversal."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

__all__ = ["Op", "Circuit", "reverse_circuit", "INVERSE"]

INVERSE = {"H": "H", "P": "Pdag", "Pdag": "P", "X": "X", "Y": "Y", "Z": "Z", "CNOT": "CNOT"}
SINGLE = ("H", "P", "Pdag", "X", "Y", "Z")


@dataclass(frozen=True)
class Op:
    """One circuit instruction on 0-based columns.

    ``g`` is a gate name, ``"MZ"``, ``"ResetPlus"`` or (time-reversed
    circuits only) ``"TRM"``: the entangling CNOT of a time-reversed
    measurement, written ``q=(emitter, photon)``. ``cond`` lists Paulis
    applied when a measurement returns 1.
    """

    g: str
    q: tuple[int, ...]
    cond: tuple[tuple[str, int], ...] = ()


@dataclass
class Circuit:
    n_photons: int
    n_emitters: int
    ordering: list[int]
    ops: list[Op] = field(default_factory=list)
    direction: str = "forward"

    def __post_init__(self):
        if self.direction not in ("forward", "time-reversed"):
            raise ValueError(f"bad direction {self.direction!r}")

    @property
    def n_qubits(self) -> int:
        return self.n_photons + self.n_emitters

    def is_emitter(self, q: int) -> bool:
        return q >= self.n_photons

    @property
    def emitter_cnots(self) -> int:
        return sum(1 for op in self.ops if op.g == "CNOT"
                   and self.is_emitter(op.q[0]) and self.is_emitter(op.q[1]))

    def label(self, q: int) -> int:
        """1-based external label: photon column → vertex, emitter k → n_p + k + 1."""
        return self.ordering[q] if q < self.n_photons else q + 1

    def column(self, label: int) -> int:
        if label > self.n_photons:
            return label - 1
        return self.ordering.index(label)

    def check_structure(self) -> None:
        """Raise ``ValueError`` if a hardware constraint is violated."""
        emissions = [0] * self.n_photons
        for op in self.ops:
            if op.g in ("CNOT", "TRM"):
                c, t = op.q
                if not self.is_emitter(c) and not self.is_emitter(t):
                    raise ValueError("photon-photon two-qubit gate")
                if not self.is_emitter(c):
                    raise ValueError("photon used as CNOT control")
                if not self.is_emitter(t):
                    emissions[t] += 1
            elif op.g in ("MZ", "ResetPlus") and not self.is_emitter(op.q[0]):
                raise ValueError("measurement on a photon")
        if self.direction == "forward" and any(e != 1 for e in emissions):
            raise ValueError("every photon needs exactly one emission CNOT")

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        ops = []
        for op in self.ops:
            ops.append({
                "g": op.g,
                "q": [self.label(q) for q in op.q],
                "cond": [{"g": p, "q": [self.label(q)]} for p, q in op.cond],
            })
        return {
            "n_photons": self.n_photons,
            "n_emitters": self.n_emitters,
            "ordering": list(self.ordering),
            "ops": ops,
            "emitter_cnots": self.emitter_cnots,
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict, direction: str = "forward") -> "Circuit":
        c = cls(data["n_photons"], data["n_emitters"], list(data["ordering"]), [], direction)
        for raw in data["ops"]:
            q = tuple(c.column(lbl) for lbl in raw["q"])
            cond = tuple((d["g"], c.column(d["q"][0])) for d in raw.get("cond", []))
            c.ops.append(Op(raw["g"], q, cond))
        return c

    @classmethod
    def from_json(cls, text: str, direction: str = "forward") -> "Circuit":
        return cls.from_dict(json.loads(text), direction)

    # -- rendering -------------------------------------------------------------
    def to_text(self) -> str:
        """Column layout: one wire per qubit, one gate layer per column."""
        layers: list[dict[int, str]] = []
        busy = [0] * self.n_qubits
        for op in self.ops:
            if op.g in ("CNOT", "TRM"):
                lo, hi = min(op.q), max(op.q)
                span = range(lo, hi + 1)
            else:
                span = range(op.q[0], op.q[0] + 1)
            col = max(busy[q] for q in span)
            for q in span:
                busy[q] = col + 1
            while len(layers) <= col:
                layers.append({})
            cell = layers[col]
            if op.g in ("CNOT", "TRM"):
                c, t = op.q
                for q in span:
                    cell[q] = "|"
                cell[c] = "@"
                cell[t] = "X" if op.g == "CNOT" else "T"
            elif op.g == "MZ":
                tag = "M" + "".join(f"{p}{self.label(q)}" for p, q in op.cond)
                cell[op.q[0]] = tag
            elif op.g == "ResetPlus":
                cell[op.q[0]] = "|+>"
            else:
                cell[op.q[0]] = op.g
        widths = [max([len(s) for s in layer.values()] + [1]) for layer in layers]
        lines = []
        for q in range(self.n_qubits):
            name = (f"p{self.label(q)}" if q < self.n_photons else f"e{q - self.n_photons + 1}")
            parts = []
            for layer, w in zip(layers, widths):
                parts.append(layer.get(q, "-" * w).center(w, "-"))
            lines.append(f"{name:>5}: -" + "-".join(parts) + "-")
        return "\n".join(lines)


def reverse_circuit(c: Circuit) -> Circuit:
    """Forward circuit from a time-reversed one.

    Gates are inverted and reversed; the entangling CNOT of a time-reversed
    measurement becomes a Z measurement of the emitter (flip the photon on
    outcome 1) followed by a reset to |+>.
    """
    if c.direction != "time-reversed":
        raise ValueError("reverse_circuit expects a time-reversed circuit")
    out = Circuit(c.n_photons, c.n_emitters, list(c.ordering), [], "forward")
    for op in reversed(c.ops):
        if op.g == "TRM":
            emitter, photon = op.q
            out.ops.append(Op("MZ", (emitter,), (("X", photon),)))
            out.ops.append(Op("ResetPlus", (emitter,)))
        elif op.g in INVERSE:
            out.ops.append(Op(INVERSE[op.g], op.q))
        else:
            raise ValueError(f"cannot reverse {op.g!r}")
    return out


def unreverse_circuit(c: Circuit) -> Circuit:
    """Inverse of :func:`reverse_circuit` (forward → time-reversed)."""
    if c.direction != "forward":
        raise ValueError("expected a forward circuit")
    out = Circuit(c.n_photons, c.n_emitters, list(c.ordering), [], "time-reversed")
    ops = list(c.ops)
    i = len(ops) - 1
    while i >= 0:
        op = ops[i]
        if op.g == "ResetPlus":
            meas = ops[i - 1] if i > 0 else None
            if meas is None or meas.g != "MZ" or meas.q != op.q or len(meas.cond) != 1:
                raise ValueError("ResetPlus must follow its measurement")
            out.ops.append(Op("TRM", (op.q[0], meas.cond[0][1])))
            i -= 2
            continue
        if op.g not in INVERSE:
            raise ValueError(f"cannot reverse {op.g!r}")
        out.ops.append(Op(INVERSE[op.g], op.q))
        i -= 1
    return out
