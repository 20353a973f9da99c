import os
import random
import subprocess
import sys

import pytest

from conftest import gf2_rank_dense
from gsforge import _pykernels, kernels
from gsforge.graphs import Graph
from gsforge.tableau import StabilizerTableau

ckernels = pytest.importorskip("gsforge._ckernels")


def scrambled(n: int, rng: random.Random) -> StabilizerTableau:
    g = Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                  if rng.random() < 0.3])
    t = StabilizerTableau.from_graph(g)
    for _ in range(3 * n):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            t.cnot(a, b)
        t.apply(rng.choice(("H", "P", "Z")), a)
    perm = list(range(n))
    rng.shuffle(perm)
    t.xs = [t.xs[i] for i in perm]
    t.zs = [t.zs[i] for i in perm]
    t.signs = [t.signs[i] for i in perm]
    return t


SIZES = [1, 2, 5, 9, 17, 63, 64, 65, 130]


@pytest.mark.parametrize("n", SIZES)
def test_rref_backends_agree(n, rng):
    for _ in range(6):
        t = scrambled(n, rng)
        a = (t.xs[:], t.zs[:], t.signs[:])
        b = (t.xs[:], t.zs[:], t.signs[:])
        _pykernels.rref(*a, n)
        ckernels.rref(*b, n)
        assert a == b


@pytest.mark.parametrize("n", SIZES)
def test_back_substitute_backends_agree(n, rng):
    for _ in range(6):
        t = scrambled(n, rng)
        t.rref()
        exit_row = rng.randrange(n)
        a = (t.xs[:], t.zs[:], t.signs[:])
        b = (t.xs[:], t.zs[:], t.signs[:])
        _pykernels.back_substitute(*a, exit_row, n)
        ckernels.back_substitute(*b, exit_row, n)
        assert a == b


@pytest.mark.parametrize("n", SIZES)
def test_graph_adjacency_backends_agree(n, rng):
    for _ in range(6):
        t = scrambled(n, rng)
        assert _pykernels.graph_adjacency(t.xs, t.zs, n) == ckernels.graph_adjacency(t.xs, t.zs, n)


def test_graph_adjacency_rejects_dependent_rows():
    for mod in (_pykernels, ckernels):
        with pytest.raises(ValueError):
            mod.graph_adjacency([1, 1], [0, 0], 2)


def test_gf2_rank_matches_dense(rng):
    for _ in range(100):
        rows, cols = rng.randint(1, 12), rng.randint(1, 12)
        dense = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)]
        packed = [sum(bit << c for c, bit in enumerate(r)) for r in dense]
        assert kernels.gf2_rank(packed) == gf2_rank_dense(dense)


def test_rowsum_rejects_anticommuting_rows():
    xs, zs, ss = [1, 0], [0, 1], [0, 0]
    with pytest.raises(ArithmeticError):
        kernels.rowsum(xs, zs, ss, 0, 1)


def test_backend_selected_at_import():
    assert kernels.BACKEND == "cython"
    env = dict(os.environ, GSF_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import gsforge; print(gsforge.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
