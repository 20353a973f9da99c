"""Stabilizer tableau without destabilizers.

Column ``q`` (0-based) of a tableau is a qubit; synthesis puts photons in
emission order first and emitters after them. Each generator row is a pair of
ints ``(x, z)`` plus a sign bit (0 for +1, 1 for -1).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import Optional

from gsforge import kernels
from gsforge.graphs import Graph

__all__ = [
    "StabilizerTableau",
    "from_graph",
    "apply_gate",
    "rowsum",
    "rref",
    "back_substitute",
    "height",
    "num_emitters",
    "to_graph",
    "pauli_string",
    "parse_pauli",
    "GATES",
]

GATES = ("H", "P", "Pdag", "X", "Y", "Z", "CNOT")

_CHAR = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def pauli_string(x: int, z: int, n: int, sign: int = 0) -> str:
    body = "".join(_CHAR[((x >> q) & 1, (z >> q) & 1)] for q in range(n))
    return ("-" if sign else "+") + body


def parse_pauli(text: str) -> tuple[int, int, int]:
    """``"+XZI"`` → ``(x, z, sign)``; the sign prefix is optional."""
    sign = 0
    if text[:1] in "+-−":
        sign = 0 if text[0] == "+" else 1
        text = text[1:]
    x = z = 0
    for q, ch in enumerate(text):
        if ch in "XY":
            x |= 1 << q
        if ch in "ZY":
            z |= 1 << q
        if ch not in "IXYZ":
            raise ValueError(f"bad Pauli letter {ch!r}")
    return x, z, sign


class StabilizerTableau:
    """Mutable stabilizer generator list; every method mutates in place."""

    __slots__ = ("n", "xs", "zs", "signs", "n_photons")

    def __init__(self, n: int, xs: Sequence[int], zs: Sequence[int], signs: Sequence[int],
                 n_photons: Optional[int] = None):
        if not (len(xs) == len(zs) == len(signs) == n):
            raise ValueError("tableau needs exactly n rows")
        self.n = n
        self.xs = list(xs)
        self.zs = list(zs)
        self.signs = [int(s) & 1 for s in signs]
        self.n_photons = n if n_photons is None else n_photons

    # -- construction -------------------------------------------------------
    @classmethod
    def from_graph(cls, g: Graph, n_emitters: int = 0) -> "StabilizerTableau":
        """Graph state on columns ``0..n-1`` plus ``n_emitters`` qubits in |0>."""
        n = g.n + n_emitters
        xs = [1 << i for i in range(g.n)] + [0] * n_emitters
        zs = list(g.rows) + [1 << (g.n + k) for k in range(n_emitters)]
        return cls(n, xs, zs, [0] * n, n_photons=g.n)

    @classmethod
    def from_strings(cls, rows: Iterable[str], n_photons: Optional[int] = None
                     ) -> "StabilizerTableau":
        parsed = [parse_pauli(r) for r in rows]
        n = len(parsed)
        return cls(n, [p[0] for p in parsed], [p[1] for p in parsed],
                   [p[2] for p in parsed], n_photons)

    @classmethod
    def zero_state(cls, n: int, n_photons: Optional[int] = None) -> "StabilizerTableau":
        return cls(n, [0] * n, [1 << q for q in range(n)], [0] * n, n_photons)

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n = self.n
        t.xs = self.xs[:]
        t.zs = self.zs[:]
        t.signs = self.signs[:]
        t.n_photons = self.n_photons
        return t

    def key(self) -> tuple:
        return (tuple(self.xs), tuple(self.zs), tuple(self.signs))

    # -- gates ---------------------------------------------------------------
    def _q(self, q: int) -> int:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} out of range 0..{self.n - 1}")
        return 1 << q

    def h(self, q: int) -> None:
        b = self._q(q)
        xs, zs, s = self.xs, self.zs, self.signs
        for r in range(self.n):
            x, z = xs[r] & b, zs[r] & b
            if x and z:
                s[r] ^= 1
            if x != 0 or z != 0:
                if bool(x) != bool(z):
                    xs[r] ^= b
                    zs[r] ^= b

    def p(self, q: int) -> None:
        b = self._q(q)
        xs, zs, s = self.xs, self.zs, self.signs
        for r in range(self.n):
            if xs[r] & b:
                if zs[r] & b:
                    s[r] ^= 1
                zs[r] ^= b

    def pdag(self, q: int) -> None:
        b = self._q(q)
        xs, zs, s = self.xs, self.zs, self.signs
        for r in range(self.n):
            if xs[r] & b:
                if not zs[r] & b:
                    s[r] ^= 1
                zs[r] ^= b

    def pauli_x(self, q: int) -> None:
        b = self._q(q)
        for r in range(self.n):
            if self.zs[r] & b:
                self.signs[r] ^= 1

    def pauli_z(self, q: int) -> None:
        b = self._q(q)
        for r in range(self.n):
            if self.xs[r] & b:
                self.signs[r] ^= 1

    def pauli_y(self, q: int) -> None:
        b = self._q(q)
        for r in range(self.n):
            if (self.xs[r] ^ self.zs[r]) & b:
                self.signs[r] ^= 1

    def cnot(self, control: int, target: int) -> None:
        bc, bt = self._q(control), self._q(target)
        if control == target:
            raise ValueError("CNOT control and target must differ")
        xs, zs, s = self.xs, self.zs, self.signs
        for r in range(self.n):
            x, z = xs[r], zs[r]
            xc = x & bc
            zt = z & bt
            if xc:
                if zt and bool(x & bt) == bool(z & bc):
                    s[r] ^= 1
                xs[r] = x ^ bt
            if zt:
                zs[r] = z ^ bc

    def apply(self, gate: str, *qubits: int) -> None:
        """Apply a named gate (see ``GATES``) on 0-based qubit columns."""
        fn = _DISPATCH.get(gate)
        if fn is None:
            raise ValueError(f"unknown gate {gate!r}")
        want = 2 if gate == "CNOT" else 1
        if len(qubits) != want:
            raise ValueError(f"{gate} takes {want} qubit(s)")
        fn(self, *qubits)

    # -- row algebra -----------------------------------------------------------
    def rowsum(self, dest: int, src: int) -> None:
        """Replace row ``dest`` by the product ``dest * src``."""
        if dest == src:
            raise ValueError("cannot multiply a row by itself")
        kernels.rowsum(self.xs, self.zs, self.signs, dest, src)

    def swap_rows(self, i: int, j: int) -> None:
        self.xs[i], self.xs[j] = self.xs[j], self.xs[i]
        self.zs[i], self.zs[j] = self.zs[j], self.zs[i]
        self.signs[i], self.signs[j] = self.signs[j], self.signs[i]

    def rref(self) -> None:
        kernels.rref(self.xs, self.zs, self.signs, self.n)

    def back_substitute(self, exit_row: int = 0) -> None:
        kernels.back_substitute(self.xs, self.zs, self.signs, exit_row, self.n)

    def is_rref(self) -> bool:
        lead = [self.leftmost(r) for r in range(self.n)]
        if any(a > b for a, b in zip(lead, lead[1:])):
            return False
        by_col: dict[int, list[int]] = {}
        for r, c in enumerate(lead):
            by_col.setdefault(c, []).append(r)
        for c, rows in by_col.items():
            if c >= self.n:
                return False
            if len(rows) > 2:
                return False
            if len(rows) == 2:
                kinds = {_CHAR[((self.xs[r] >> c) & 1, (self.zs[r] >> c) & 1)] for r in rows}
                if "Z" not in kinds or len(kinds) != 2:
                    return False
        return True

    # -- queries -----------------------------------------------------------------
    def support(self, r: int) -> int:
        return self.xs[r] | self.zs[r]

    def weight(self, r: int) -> int:
        return (self.xs[r] | self.zs[r]).bit_count()

    def leftmost(self, r: int) -> int:
        s = self.xs[r] | self.zs[r]
        return (s & -s).bit_length() - 1 if s else self.n

    def pauli(self, r: int, q: int) -> str:
        return _CHAR[((self.xs[r] >> q) & 1, (self.zs[r] >> q) & 1)]

    def row_string(self, r: int) -> str:
        return pauli_string(self.xs[r], self.zs[r], self.n, self.signs[r])

    def dump(self) -> str:
        """One row per line from ``{I,X,Y,Z}``, prefixed by ``+``/``−``."""
        return "\n".join(self.row_string(r).replace("-", "−", 1) for r in range(self.n))

    def __repr__(self) -> str:
        return f"StabilizerTableau(n={self.n}, rows={[self.row_string(r) for r in range(self.n)]})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StabilizerTableau) and self.key() == other.key()

    __hash__ = None  # mutable

    def check_invariants(self) -> None:
        """Raise if rows fail to commute pairwise or are dependent."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if ((self.xs[i] & self.zs[j]) ^ (self.xs[j] & self.zs[i])).bit_count() & 1:
                    raise AssertionError(f"rows {i} and {j} anticommute")
        vecs = [x | (z << self.n) for x, z in zip(self.xs, self.zs)]
        if kernels.gf2_rank(vecs) != self.n:
            raise AssertionError("generators are dependent")

    # -- group membership ------------------------------------------------------
    def _basis(self):
        n = self.n
        pivots: dict[int, tuple[int, int]] = {}
        for r in range(n):
            v = self.xs[r] | (self.zs[r] << n)
            combo = 1 << r
            while v:
                hb = v.bit_length() - 1
                hit = pivots.get(hb)
                if hit is None:
                    pivots[hb] = (v, combo)
                    break
                v ^= hit[0]
                combo ^= hit[1]
        return pivots

    def member_sign(self, x: int, z: int, basis=None) -> Optional[int]:
        """Sign bit with which ``(x, z)`` lies in the group, or ``None``."""
        n = self.n
        if basis is None:
            basis = self._basis()
        v = x | (z << n)
        combo = 0
        while v:
            hb = v.bit_length() - 1
            hit = basis.get(hb)
            if hit is None:
                return None
            v ^= hit[0]
            combo ^= hit[1]
        px = pz = ps = 0
        while combo:
            low = combo & -combo
            r = low.bit_length() - 1
            combo ^= low
            ps = kernels.product_sign(px, pz, ps, self.xs[r], self.zs[r], self.signs[r])
            px ^= self.xs[r]
            pz ^= self.zs[r]
        return ps

    def same_state(self, other: "StabilizerTableau") -> bool:
        if other.n != self.n:
            return False
        basis = self._basis()
        return all(self.member_sign(other.xs[r], other.zs[r], basis) == other.signs[r]
                   for r in range(other.n))

    def measure_z(self, q: int, outcome_if_random: int = 0) -> tuple[int, bool]:
        """Projective Z measurement; returns ``(outcome, was_random)``."""
        b = self._q(q)
        anti = [r for r in range(self.n) if self.xs[r] & b]
        if not anti:
            sign = self.member_sign(0, b)
            assert sign is not None
            return sign, False
        p = anti[0]
        for r in anti[1:]:
            self.rowsum(r, p)
        self.xs[p] = 0
        self.zs[p] = b
        self.signs[p] = outcome_if_random & 1
        return outcome_if_random & 1, True

    # -- column permutation ------------------------------------------------------
    def permute_columns(self, perm: Sequence[int]) -> None:
        """Move column ``q`` to column ``perm[q]`` (``perm`` a permutation)."""
        def move(v: int) -> int:
            out = 0
            while v:
                low = v & -v
                out |= 1 << perm[low.bit_length() - 1]
                v ^= low
            return out
        self.xs = [move(v) for v in self.xs]
        self.zs = [move(v) for v in self.zs]

    # -- graph form ----------------------------------------------------------------
    def graph_form(self) -> tuple[Graph, list[tuple[str, int]]]:
        """Local Cliffords ``U`` (0-based, in application order) with ``U|psi> = |G>``.

        Works on a copy; the tableau itself is not modified.
        """
        t = self.copy()
        n = t.n
        ops: list[tuple[str, int]] = []
        # X-part elimination
        top = 0
        pivot_cols = []
        for c in range(n):
            b = 1 << c
            rows = [r for r in range(top, n) if t.xs[r] & b]
            if not rows:
                continue
            t.swap_rows(top, rows[0])
            for r in range(n):
                if r != top and t.xs[r] & b:
                    t.rowsum(r, top)
            pivot_cols.append(c)
            top += 1
        pivset = set(pivot_cols)
        for c in range(n):
            if c not in pivset:
                t.h(c)
                ops.append(("H", c))
        # Gauss-Jordan so that row c carries X only on column c
        for c in range(n):
            b = 1 << c
            rows = [r for r in range(c, n) if t.xs[r] & b]
            if not rows:
                raise ValueError("tableau generators are dependent")
            t.swap_rows(c, rows[0])
            for r in range(n):
                if r != c and t.xs[r] & b:
                    t.rowsum(r, c)
        for c in range(n):
            if t.zs[c] >> c & 1:
                t.pdag(c)
                ops.append(("Pdag", c))
        for c in range(n):
            if t.signs[c]:
                t.pauli_z(c)
                ops.append(("Z", c))
        for c in range(n):
            if t.zs[c] >> c & 1 or t.xs[c] != 1 << c:
                raise AssertionError("graph-form reduction failed")
        return Graph.from_rows(t.zs), ops

    def graph_adjacency(self) -> list[int]:
        """Adjacency rows of ``graph_form()``'s graph, without phases or gate bookkeeping."""
        return kernels.graph_adjacency(self.xs, self.zs, self.n)


_DISPATCH = {
    "H": StabilizerTableau.h,
    "P": StabilizerTableau.p,
    "Pdag": StabilizerTableau.pdag,
    "X": StabilizerTableau.pauli_x,
    "Y": StabilizerTableau.pauli_y,
    "Z": StabilizerTableau.pauli_z,
    "CNOT": StabilizerTableau.cnot,
}


# ---------------------------------------------------------------- functional API

def from_graph(g: Graph) -> StabilizerTableau:
    return StabilizerTableau.from_graph(g)


def apply_gate(t: StabilizerTableau, gate: str, *qubits: int) -> StabilizerTableau:
    out = t.copy()
    out.apply(gate, *qubits)
    return out


def rowsum(t: StabilizerTableau, dest: int, src: int) -> StabilizerTableau:
    out = t.copy()
    out.rowsum(dest, src)
    return out


def rref(t: StabilizerTableau) -> StabilizerTableau:
    out = t.copy()
    out.rref()
    return out


def back_substitute(t: StabilizerTableau, exit_row: int = 0) -> StabilizerTableau:
    if not t.is_rref():
        raise ValueError("back-substitution needs a tableau in echelon form")
    out = t.copy()
    out.back_substitute(exit_row)
    return out


def _ordered(t: StabilizerTableau, ordering: Optional[Sequence[int]]) -> StabilizerTableau:
    """Copy with photon columns placed in emission order.

    ``ordering[j]`` is the 1-based label of the ``j``-th emitted photon.
    """
    out = t.copy()
    if ordering is not None:
        if sorted(ordering) != list(range(1, t.n_photons + 1)):
            raise ValueError("ordering must be a permutation of the photon labels")
        perm = list(range(t.n))
        for j, label in enumerate(ordering):
            perm[label - 1] = j
        out.permute_columns(perm)
    return out


def height(t: StabilizerTableau, ordering: Optional[Sequence[int]] = None) -> list[int]:
    """Entanglement across each emission cut; entry ``x`` is after ``x`` photons."""
    w = _ordered(t, ordering)
    w.rref()
    n = w.n
    lead = sorted(w.leftmost(r) for r in range(n))
    h = []
    k = 0
    for x in range(n + 1):
        while k < n and lead[k] < x:
            k += 1
        h.append((n - x) - (n - k))
    return h


def num_emitters(t: StabilizerTableau, ordering: Optional[Sequence[int]] = None) -> int:
    return max(height(t, ordering))


def to_graph(t: StabilizerTableau) -> tuple[Graph, list[tuple[str, int]]]:
    """Graph and 1-based local ops ``U`` (in order) such that ``U|psi> = |G>``."""
    g, ops = t.graph_form()
    return g, [(name, q + 1) for name, q in ops]
