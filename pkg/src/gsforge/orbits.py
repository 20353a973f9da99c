"""Local-complementation orbits and Bouchet-style orbit counting."""

from __future__ import annotations

import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Union

from gsforge.graphs import (
    Graph,
    _components_rows,
    _delete,
    _lc_rows,
    find_isomorphism,
    invariant_hash,
    local_complement,
    make_family,
    rgs_many_leaves_ordering,
)
from gsforge.kernels import gf2_rank

__all__ = [
    "OrbitBudgetExceeded",
    "OrbitReport",
    "BineighborhoodBasis",
    "map_out_orbit",
    "map_out_rgs_orbit",
    "map_out_rgs_orbit_many_leaves",
    "rgs_orbit_sequence",
    "euler_index_e",
    "bineighborhood_k",
    "orbit_size_l",
    "orbit_report",
    "lc_equivalent",
    "classify_lc_families",
    "cycle_basis",
    "e_star_closed",
    "e_rgs_closed",
    "e_rgs_partial_closed",
    "l_complete_closed",
    "l_rgs_closed",
    "k_rgs_closed",
    "rgs_noniso_orbit_size",
]


class OrbitBudgetExceeded(RuntimeError):
    pass


@dataclass
class BineighborhoodBasis:
    vectors: list[int]
    dim: int


@dataclass
class OrbitReport:
    members: list[Graph] = field(default_factory=list)
    counted_size: Optional[Union[int, Fraction]] = None
    e: Optional[int] = None
    k: Optional[int] = None
    in_mu: Optional[bool] = None
    iso_policy: str = "keep"

    def summary(self) -> dict:
        return {
            "e": self.e,
            "k": self.k,
            "l": (str(self.counted_size) if isinstance(self.counted_size, Fraction)
                  else self.counted_size),
            "in_mu": self.in_mu,
            "n_members": len(self.members),
        }


# ---------------------------------------------------------------- orbit BFS

class _IsoIndex:
    """Set of graphs up to isomorphism, bucketed by an invariant."""

    def __init__(self):
        self.buckets: dict[int, list[Graph]] = {}

    def add_if_new(self, g: Graph) -> bool:
        key = invariant_hash(g)
        bucket = self.buckets.setdefault(key, [])
        for h in bucket:
            if h == g or find_isomorphism(g, h) is not None:
                return False
        bucket.append(g)
        return True


def _lc_neighbours(rows: tuple[int, ...]):
    for i, r in enumerate(rows):
        if r.bit_count() < 2:
            continue
        new = list(rows)
        _lc_rows(new, i)
        yield tuple(new)


def map_out_orbit(g: Graph, keep_isomorphs: bool = True, budget: int = 2_000_000
                  ) -> list[Graph]:
    """Breadth-first LC orbit of ``g`` (complementing about non-leaf vertices).

    With ``keep_isomorphs=False`` a new graph is dropped when isomorphic to
    one already found.
    """
    if keep_isomorphs:
        seen = {g.rows}
        order = [g.rows]
        level = [g.rows]
        while level:
            nxt = []
            for rows in level:
                for new in _lc_neighbours(rows):
                    if new not in seen:
                        seen.add(new)
                        order.append(new)
                        nxt.append(new)
                        if len(seen) > budget:
                            raise OrbitBudgetExceeded("orbit exceeds the member budget")
            level = nxt
        return [Graph._trusted(r) for r in order]
    index = _IsoIndex()
    index.add_if_new(g)
    seen = {g.rows}
    out = [g]
    level = [g]
    while level:
        nxt = []
        for h in level:
            for new in _lc_neighbours(h.rows):
                if new in seen:
                    continue
                seen.add(new)
                if len(seen) > budget:
                    raise OrbitBudgetExceeded("orbit exceeds the member budget")
                cand = Graph._trusted(new)
                if index.add_if_new(cand):
                    out.append(cand)
                # keep walking through isomorphs too, or parts of the orbit are missed
                nxt.append(cand)
        level = nxt
    return out


def rgs_orbit_sequence(n: int) -> list[int]:
    """LC vertex sequence on the RGS (cores ``1..n``, leaf of core ``i`` is ``n+i``)."""
    if n < 3:
        raise ValueError("RGS orbit needs n >= 3")
    size = rgs_noniso_orbit_size(n)
    nodes = [1, 2]
    seq = list(nodes)
    while True:
        leaf = n + nodes[0]
        nodes = [v + 2 for v in nodes]
        seq += [leaf] + nodes
        if len(seq) >= size - 1:
            break
    seen = set()
    uniq = []
    for v in seq:
        if v not in seen:
            seen.add(v)
            uniq.append(v)
    if n % 2 == 0:
        uniq.pop()
    return uniq


def _walk(g: Graph, seq: Iterable[int]) -> list[Graph]:
    out = [g]
    for v in seq:
        g = local_complement(g, v)
        out.append(g)
    return out


def map_out_rgs_orbit(n: int, ordering: Optional[Sequence[int]] = None) -> list[Graph]:
    """Non-isomorphic LC orbit of the RGS through a fixed LC sequence.

    ``ordering[v-1]`` is the label given to vertex ``v`` of the standard RGS
    labelling in every returned member.
    """
    members = _walk(make_family("rgs", n), rgs_orbit_sequence(n))
    if ordering is not None:
        members = [m.relabel(list(ordering)) for m in members]
    return members


def map_out_rgs_orbit_many_leaves(n: int, leaves: int) -> list[Graph]:
    """Non-isomorphic LC orbit of the multi-leaf RGS in its two-emitter labelling.

    The single-leaf sequence is reused: a core step acts on that core and a
    leaf step on the first leaf of the corresponding core.
    """
    if n < 3 or leaves < 1:
        raise ValueError("invalid RGS size")
    block = leaves + 1
    core_label = {}
    first_leaf = {}
    for i in range(1, n + 1):
        start = (i - 1) * block
        core_label[i] = start + block
        first_leaf[i] = start + 1
        if i >= 2:
            core_label[i], first_leaf[i] = first_leaf[i], core_label[i]
    seq = [core_label[v] if v <= n else first_leaf[v - n] for v in rgs_orbit_sequence(n)]
    return _walk(rgs_many_leaves_ordering(n, leaves), seq)


# ---------------------------------------------------------------- counting

def _e_rows(rows: tuple[int, ...], memo: dict) -> int:
    n = len(rows)
    if n == 0:
        return 1
    hit = memo.get(rows)
    if hit is not None:
        return hit
    comps = _components_rows(rows)
    if len(comps) > 1:
        total = 1
        for c in comps:
            keep = [i for i in range(n) if (c >> i) & 1]
            pos = {v: k for k, v in enumerate(keep)}
            sub = []
            for i in keep:
                r = rows[i]
                new = 0
                for v in keep:
                    if (r >> v) & 1:
                        new |= 1 << pos[v]
                sub.append(new)
            total *= _e_rows(tuple(sub), memo)
        memo[rows] = total
        return total
    if n == 1:
        return 2
    v = min(range(n), key=lambda i: (rows[i].bit_count(), i))
    nb = rows[v]
    w = (nb & -nb).bit_length() - 1
    plain = _delete(rows, v)
    lc = list(rows)
    _lc_rows(lc, v)
    lc_del = _delete(lc, v)
    pv = list(rows)
    _lc_rows(pv, v)
    _lc_rows(pv, w)
    _lc_rows(pv, v)
    pv_del = _delete(pv, v)
    total = (_e_rows(tuple(plain), memo) + _e_rows(tuple(lc_del), memo)
             + _e_rows(tuple(pv_del), memo))
    memo[rows] = total
    return total


def euler_index_e(g: Graph, memo: Optional[dict] = None) -> int:
    """Index ``e(G)`` from the three-minor deletion recursion (``e(K_1) = 2``)."""
    return _e_rows(g.rows, {} if memo is None else memo)


def cycle_basis(g: Graph) -> list[list[tuple[int, int]]]:
    """Fundamental cycles of a BFS spanning forest, as 1-based edge lists."""
    n = g.n
    parent = [-1] * n
    depth = [0] * n
    seen = [False] * n
    tree = set()
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        for u in queue:
            for v in range(n):
                if (g.rows[u] >> v) & 1 and not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    tree.add((min(u, v), max(u, v)))
                    queue.append(v)
    cycles = []
    for u, v in g.edges():
        a, b = u - 1, v - 1
        if (a, b) in tree:
            continue
        path_a, path_b = [a], [b]
        x, y = a, b
        while depth[x] > depth[y]:
            x = parent[x]
            path_a.append(x)
        while depth[y] > depth[x]:
            y = parent[y]
            path_b.append(y)
        while x != y:
            x = parent[x]
            y = parent[y]
            path_a.append(x)
            path_b.append(y)
        loop = path_a + path_b[-2::-1]
        edges = [(min(loop[i], loop[i + 1]) + 1, max(loop[i], loop[i + 1]) + 1)
                 for i in range(len(loop) - 1)]
        edges.append((min(b, a) + 1, max(b, a) + 1))
        cycles.append(edges)
    return cycles


def bineighborhood_k(g: Graph) -> tuple[int, bool, BineighborhoodBasis]:
    """Index ``k(G)``, class-mu membership and the reduced bineighborhood basis."""
    if len(_components_rows(g.rows)) != 1:
        raise ValueError("k(G) needs a connected graph")
    n = g.n
    rows = g.rows
    full = (1 << n) - 1

    def nu(u: int, v: int) -> int:
        return rows[u] & rows[v]

    vectors = []
    comp_ok = True
    for u in range(n):
        non = full & ~rows[u] & ~((1 << (u + 1)) - 1)
        while non:
            low = non & -non
            v = low.bit_length() - 1
            non ^= low
            vec = nu(u, v)
            vectors.append(vec)
            if vec.bit_count() & 1:
                comp_ok = False
    cyc_ok = True
    for cyc in cycle_basis(g):
        vec = 0
        for a, b in cyc:
            vec ^= nu(a - 1, b - 1)
        vectors.append(vec)
        if (vec.bit_count() - len(cyc)) & 1:
            cyc_ok = False
    in_mu = all(r.bit_count() & 1 for r in rows) and comp_ok and cyc_ok
    basis = _reduce(vectors)
    dim = len(basis)
    k = 2 ** (n - dim) + (2 if in_mu else 0)
    return k, in_mu, BineighborhoodBasis(basis, dim)


def _reduce(vectors: Iterable[int]) -> list[int]:
    piv: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            if h not in piv:
                piv[h] = v
                break
            v ^= piv[h]
    out = sorted(piv.values(), reverse=True)
    assert gf2_rank(out) == len(out)
    return out


def orbit_size_l(g: Graph, strict: bool = True) -> Union[int, Fraction]:
    """Orbit size ``e(G)/k(G)``; for a non-integral ratio raise (strict) or warn."""
    e = euler_index_e(g)
    k, _, _ = bineighborhood_k(g)
    if e % k == 0:
        return e // k
    if strict:
        raise ValueError(f"e/k = {e}/{k} is not an integer")
    warnings.warn(f"e/k = {e}/{k} is not an integer; input may not be a circle graph",
                  stacklevel=2)
    return Fraction(e, k)


def orbit_report(g: Graph, enumerate_members: bool = True, keep_isomorphs: bool = True,
                 count: bool = True) -> OrbitReport:
    rep = OrbitReport(iso_policy="keep" if keep_isomorphs else "discard")
    if enumerate_members:
        rep.members = map_out_orbit(g, keep_isomorphs)
    if count:
        rep.e = euler_index_e(g)
        rep.k, rep.in_mu, _ = bineighborhood_k(g)
        rep.counted_size = (rep.e // rep.k if rep.e % rep.k == 0 else Fraction(rep.e, rep.k))
    return rep


# ---------------------------------------------------------------- equivalence

def lc_equivalent(g1: Graph, g2: Graph, budget: int = 1_000_000) -> bool:
    """Exact labelled LC equivalence by bounded orbit search from both ends."""
    if g1.n != g2.n:
        raise ValueError("graphs must have the same vertex count")
    if g1 == g2:
        return True
    seen = [{g1.rows}, {g2.rows}]
    levels = [[g1.rows], [g2.rows]]
    while levels[0] and levels[1]:
        side = 0 if len(levels[0]) <= len(levels[1]) else 1
        nxt = []
        for rows in levels[side]:
            for new in _lc_neighbours(rows):
                if new in seen[1 - side]:
                    return True
                if new not in seen[side]:
                    seen[side].add(new)
                    nxt.append(new)
        if len(seen[0]) + len(seen[1]) > budget:
            raise OrbitBudgetExceeded("LC-equivalence search exceeded its budget")
        levels[side] = nxt
    return False


def classify_lc_families(graphs: Iterable[Graph]) -> list[list[Graph]]:
    """Partition labelled graphs into LC-equivalence classes (input order kept)."""
    graphs = list(graphs)
    family_of: dict[tuple, int] = {}
    families: list[list[Graph]] = []
    for g in graphs:
        fid = family_of.get(g.rows)
        if fid is None:
            fid = len(families)
            families.append([])
            for member in map_out_orbit(g, keep_isomorphs=True):
                family_of[member.rows] = fid
        families[fid].append(g)
    return families


# ---------------------------------------------------------------- closed forms

def e_star_closed(n: int) -> int:
    return 2 ** (n - 1) * (n + 1)


def e_rgs_closed(n: int) -> int:
    return 6 ** (n - 1) * (3 + 2 * n) + 2 ** (n - 1)


def e_rgs_partial_closed(n: int, x: int) -> int:
    """``e`` of an ``n``-core complete graph with leaves on ``x`` cores."""
    # the recursion bottoms out at the empty graph, where e is 1 rather than 1/2
    return 2 ** x * sum(comb(x, k) * (e_star_closed(n - k) if k < n else 1)
                        for k in range(x + 1))


def l_complete_closed(n: int) -> int:
    return n + 1


def k_rgs_closed(n: int) -> int:
    return 2 ** n


def l_rgs_closed(n: int) -> int:
    return (1 + 3 ** (n - 1) * (3 + 2 * n)) // 2


def rgs_noniso_orbit_size(n: int) -> int:
    return (3 * (2 * n + 1) - (-1) ** (n + 1)) // 4
