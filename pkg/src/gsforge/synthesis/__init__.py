"""Emitter-based generation circuits for photonic graph states."""

from gsforge.synthesis.circuit import Circuit, Op, reverse_circuit, unreverse_circuit
from gsforge.synthesis.engine import (
    PAIR_RULES,
    BudgetExceeded,
    Engine,
    OptimizerOptions,
    SynthesisError,
)
from gsforge.synthesis.optimizers import (
    OPTIMIZERS,
    SynthesisResult,
    brute_force_synthesize,
    heuristics1_synthesize,
    heuristics2_synthesize,
    naive_synthesize,
    synthesize,
)
from gsforge.synthesis.primitives import (
    disentangle_pair,
    final_disentanglement,
    time_reversed_measurement,
    try_free_absorption,
)
from gsforge.synthesis.verify import ordered_graph, simulate, verify_circuit

__all__ = [
    "Circuit",
    "Op",
    "reverse_circuit",
    "unreverse_circuit",
    "PAIR_RULES",
    "BudgetExceeded",
    "Engine",
    "OptimizerOptions",
    "SynthesisError",
    "OPTIMIZERS",
    "SynthesisResult",
    "brute_force_synthesize",
    "heuristics1_synthesize",
    "heuristics2_synthesize",
    "naive_synthesize",
    "synthesize",
    "disentangle_pair",
    "final_disentanglement",
    "time_reversed_measurement",
    "try_free_absorption",
    "ordered_graph",
    "simulate",
    "verify_circuit",
]
