import itertools
import random

import numpy as np
import pytest

from conftest import (
    SINGLE,
    apply_cnot,
    apply_single,
    cut_rank_heights,
    graph_state_vector,
    pauli_matrix,
    random_pauli_text,
)
from gsforge.graphs import Graph, make_family, random_connected_graph, rgs_natural_ordering
from gsforge.orbits import lc_equivalent
from gsforge.tableau import (
    StabilizerTableau,
    apply_gate,
    back_substitute,
    from_graph,
    height,
    num_emitters,
    parse_pauli,
    pauli_string,
    rowsum,
    rref,
    to_graph,
)


def rows_of(t: StabilizerTableau) -> list[str]:
    return [t.row_string(r) for r in range(t.n)]


def random_tableau(n: int, rng: random.Random, depth: int = 40) -> StabilizerTableau:
    g = random_connected_graph(n, 0.5, rng) if n > 1 else Graph(1, [])
    t = from_graph(g)
    for _ in range(depth):
        a, b = rng.randrange(n), rng.randrange(n)
        name = rng.choice(["H", "P", "Pdag", "X", "Y", "Z", "CNOT"])
        if name == "CNOT":
            if a != b:
                t.cnot(a, b)
        else:
            t.apply(name, a)
    return t


def stabilizes(t: StabilizerTableau, psi: np.ndarray) -> bool:
    return all(np.allclose(pauli_matrix(t.row_string(r)) @ psi, psi) for r in range(t.n))


# ---------------------------------------------------------------- construction

def test_from_graph_k2_and_single_vertex():
    assert rows_of(from_graph(make_family("path", 2))) == ["+XZ", "+ZX"]
    assert rows_of(from_graph(Graph(1, []))) == ["+X"]


def test_from_graph_stabilizes_graph_state(rng):
    for _ in range(10):
        g = random_connected_graph(rng.randint(2, 7), 0.5, rng)
        assert stabilizes(from_graph(g), graph_state_vector(g))


def test_pauli_text_round_trip(rng):
    for _ in range(50):
        text = random_pauli_text(6, rng)
        x, z, s = parse_pauli(text)
        assert pauli_string(x, z, 6, s) == text
    with pytest.raises(ValueError):
        parse_pauli("+XQ")


# ---------------------------------------------------------------- gates

def test_gate_examples():
    t = StabilizerTableau.from_strings(["+X"])
    assert rows_of(apply_gate(t, "H", 0)) == ["+Z"]
    assert rows_of(apply_gate(t, "P", 0)) == ["+Y"]
    assert rows_of(apply_gate(StabilizerTableau.from_strings(["+Y"]), "P", 0)) == ["-X"]
    zz = StabilizerTableau.from_strings(["+ZZ", "+XX"])
    assert rows_of(apply_gate(zz, "CNOT", 0, 1))[0] == "+IZ"


def test_functional_gate_does_not_mutate():
    t = StabilizerTableau.from_strings(["+X"])
    apply_gate(t, "H", 0)
    assert rows_of(t) == ["+X"]


def test_gate_errors():
    t = StabilizerTableau.from_strings(["+XZ", "+ZX"])
    with pytest.raises(ValueError):
        t.apply("CNOT", 0, 0)
    with pytest.raises(ValueError):
        t.apply("T", 0)
    with pytest.raises(IndexError):
        t.apply("H", 5)


@pytest.mark.parametrize("gate", ["H", "P", "Pdag", "X", "Y", "Z", "CNOT01", "CNOT10"])
def test_gates_match_dense_conjugation(gate):
    # every two-qubit Pauli, conjugated by the dense unitary, must match the tableau update
    n = 2
    for sign, a, b in itertools.product("+-", "IXYZ", "IXYZ"):
        text = sign + a + b
        if text[1:] == "II":
            continue
        # two copies of the row: gates act row by row, so independence is irrelevant here
        t = StabilizerTableau(2, *[[v, v] for v in parse_pauli(text)])
        if gate.startswith("CNOT"):
            c, tg = int(gate[4]), int(gate[5])
            t.cnot(c, tg)
            u = np.zeros((4, 4), dtype=complex)
            for i in range(4):
                e = np.zeros(4, dtype=complex)
                e[i] = 1
                u[:, i] = apply_cnot(e, c, tg, n)
        else:
            t.apply(gate, 0)
            u = np.kron(np.eye(2), SINGLE[gate])
        expect = u @ pauli_matrix(text) @ u.conj().T
        assert np.allclose(pauli_matrix(t.row_string(0)), expect), (gate, text)


def test_random_circuit_tracks_state_vector(rng):
    for _ in range(10):
        n = 5
        g = random_connected_graph(n, 0.5, rng)
        t = from_graph(g)
        psi = graph_state_vector(g)
        for _ in range(30):
            a, b = rng.randrange(n), rng.randrange(n)
            name = rng.choice(["H", "P", "Pdag", "X", "Y", "Z", "CNOT"])
            if name == "CNOT":
                if a == b:
                    continue
                t.cnot(a, b)
                psi = apply_cnot(psi, a, b, n)
            else:
                t.apply(name, a)
                psi = apply_single(psi, SINGLE[name], a, n)
        assert stabilizes(t, psi)


# ---------------------------------------------------------------- row algebra

def test_rowsum_xx_zz_gives_minus_yy():
    t = StabilizerTableau.from_strings(["+XX", "+ZZ"])
    assert rows_of(rowsum(t, 0, 1))[0] == "-YY"


def test_rowsum_rejects_self():
    t = StabilizerTableau.from_strings(["+XX", "+ZZ"])
    with pytest.raises(ValueError):
        t.rowsum(0, 0)


def test_rowsum_matches_symbolic_product(rng):
    done = 0
    while done < 200:
        a, b = random_pauli_text(8, rng), random_pauli_text(8, rng)
        ma, mb = pauli_matrix(a), pauli_matrix(b)
        if not np.allclose(ma @ mb, mb @ ma):
            continue
        rows = [parse_pauli(a)] + [parse_pauli(b)] * 7
        t = StabilizerTableau(8, *[list(v) for v in zip(*rows)])
        t.rowsum(0, 1)
        assert np.allclose(pauli_matrix(t.row_string(0)), ma @ mb)
        done += 1


def test_rref_k2_unchanged_up_to_row_order():
    t = from_graph(make_family("path", 2))
    assert sorted(rows_of(rref(t))) == sorted(rows_of(t))


def test_rref_p3_leftmost_pattern():
    t = rref(from_graph(make_family("path", 3)))
    assert [t.leftmost(r) for r in range(3)] == [0, 0, 1]
    assert t.is_rref()


def test_rref_preserves_state(rng):
    for _ in range(100):
        t = random_tableau(rng.randint(2, 9), rng)
        r = rref(t)
        assert r.is_rref()
        assert r.same_state(t)
        for i in range(t.n):
            assert r.member_sign(t.xs[i], t.zs[i]) == t.signs[i]


def test_back_substitute_example():
    t = StabilizerTableau.from_strings(["+XZZ", "+ZXI", "+IZZ"])
    t.rref()
    out = back_substitute(t, 0)
    assert "+XII" in rows_of(out)


def test_back_substitute_minimal_unchanged():
    t = StabilizerTableau.from_strings(["+XI", "+IZ"])
    assert rows_of(back_substitute(t, 0)) == ["+XI", "+IZ"]


def test_back_substitute_requires_rref():
    t = StabilizerTableau.from_strings(["+IZ", "+XI"])
    with pytest.raises(ValueError):
        back_substitute(t, 0)


def test_back_substitute_never_increases_weight(rng):
    for _ in range(100):
        t = rref(random_tableau(rng.randint(2, 9), rng))
        before = sum(t.weight(r) for r in range(t.n))
        out = back_substitute(t, 0)
        assert sum(out.weight(r) for r in range(out.n)) <= before
        assert out.same_state(t)


# ---------------------------------------------------------------- height

def test_height_p3():
    assert height(from_graph(make_family("path", 3))) == [0, 1, 1, 0]


def test_height_matches_cut_rank(rng):
    for _ in range(60):
        g = random_connected_graph(rng.randint(2, 10), 0.4, rng)
        assert height(from_graph(g)) == cut_rank_heights(g)


def test_height_with_ordering(rng):
    g = random_connected_graph(8, 0.4, rng)
    order = list(range(1, 9))
    rng.shuffle(order)
    relabelled = g.relabel([order.index(v) + 1 for v in range(1, 9)])
    assert height(from_graph(g), order) == cut_rank_heights(relabelled)


def test_height_disconnected_is_zero():
    assert height(from_graph(Graph(4, []))) == [0] * 5


def test_emitter_counts():
    for n in range(3, 9):
        assert num_emitters(from_graph(rgs_natural_ordering(n))) == 2
        worst = list(range(1, n + 1)) + list(range(n + 1, 2 * n + 1))
        assert num_emitters(from_graph(make_family("rgs", n)), worst) == n
    assert num_emitters(from_graph(make_family("path", 7))) == 1


def test_k33_emitter_histogram_support():
    t = from_graph(make_family("rgs", 3))
    counts = {num_emitters(t, list(p)) for p in itertools.permutations(range(1, 7))}
    assert counts == {2, 3}


# ---------------------------------------------------------------- graph extraction

def test_to_graph_identity_on_graph_states(rng):
    for _ in range(30):
        g = random_connected_graph(rng.randint(1, 10), 0.5, rng)
        h, ops = to_graph(from_graph(g))
        assert h == g and ops == []


def test_to_graph_hh_on_k2():
    # K2 is symmetric under H on both qubits, so no correction is needed
    t = from_graph(make_family("path", 2))
    t.h(0)
    t.h(1)
    h, ops = to_graph(t)
    assert h == make_family("path", 2)
    assert ops == []


def test_to_graph_ops_reach_graph_state(rng):
    for _ in range(30):
        t = random_tableau(rng.randint(2, 7), rng)
        h, ops = to_graph(t)
        u = t.copy()
        for name, q in ops:
            u.apply(name, q - 1)
        assert u.same_state(from_graph(h))


def test_to_graph_stays_in_lc_orbit(rng):
    for _ in range(10):
        g = random_connected_graph(6, 0.5, rng)
        t = from_graph(g)
        for _ in range(30):
            t.apply(rng.choice(["H", "P", "Pdag", "X", "Z"]), rng.randrange(6))
        h, _ = to_graph(t)
        assert lc_equivalent(g, h)


def test_graph_adjacency_matches_graph_form(rng):
    for _ in range(100):
        t = random_tableau(rng.randint(2, 9), rng)
        assert t.graph_adjacency() == list(t.graph_form()[0].rows)


# ---------------------------------------------------------------- measurement

def test_measure_z_deterministic_and_random():
    t = StabilizerTableau.from_strings(["+Z"])
    assert t.measure_z(0) == (0, False)
    t = StabilizerTableau.from_strings(["-Z"])
    assert t.measure_z(0) == (1, False)
    t = StabilizerTableau.from_strings(["+X"])
    bit, random_ = t.measure_z(0, 1)
    assert (bit, random_) == (1, True) and t.row_string(0) == "-Z"
