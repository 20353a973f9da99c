"""Simple undirected graphs stored as int-bitset adjacency rows.

Vertices are labelled ``1..n`` in every public function; internally row ``i``
(0-based) is an int whose bit ``j`` is set when vertices ``i+1`` and ``j+1``
are adjacent.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Iterator, Sequence
from typing import Optional

__all__ = [
    "Graph",
    "local_complement",
    "pivot",
    "vertex_minor",
    "connected_components",
    "is_isomorphic",
    "find_isomorphism",
    "invariant_hash",
    "make_family",
    "rgs_ordering",
    "rgs_natural_ordering",
    "rgs_many_leaves_ordering",
    "rgs_encoded_ordering",
    "random_connected_graph",
    "all_labeled_graphs",
    "parse_graph",
    "format_graph",
]


class Graph:
    """Immutable simple graph on vertices ``1..n``."""

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        rows = [0] * n
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) out of range 1..{n}")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            rows[u - 1] |= 1 << (v - 1)
            rows[v - 1] |= 1 << (u - 1)
        self.n = n
        self.rows = tuple(rows)
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> "Graph":
        """Build from 0-based bit rows; symmetry and zero diagonal are checked."""
        n = len(rows)
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        full = (1 << n) - 1
        for i, r in enumerate(rows):
            if r & ~full or (r >> i) & 1:
                raise ValueError("rows must be within range with zero diagonal")
            rr = r
            while rr:
                low = rr & -rr
                j = low.bit_length() - 1
                if not (rows[j] >> i) & 1:
                    raise ValueError("adjacency is not symmetric")
                rr ^= low
        g = cls.__new__(cls)
        g.n = n
        g.rows = tuple(rows)
        g._hash = None
        return g

    @classmethod
    def _trusted(cls, rows: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(rows)
        g.rows = tuple(rows)
        g._hash = None
        return g

    def neighbors(self, v: int) -> list[int]:
        self._check(v)
        return _bits_to_labels(self.rows[v - 1])

    def degree(self, v: int) -> int:
        self._check(v)
        return self.rows[v - 1].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return bool((self.rows[u - 1] >> (v - 1)) & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i, r in enumerate(self.rows):
            r >>= i + 1
            j = i + 1
            while r:
                if r & 1:
                    out.append((i + 1, j + 1))
                r >>= 1
                j += 1
        return out

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def adjacency(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def relabel(self, mapping: Sequence[int] | dict) -> "Graph":
        """Return the graph where old vertex ``v`` is renamed ``mapping[v]``.

        ``mapping`` is a dict or a sequence indexed by ``v-1``; it must be a
        permutation of ``1..n``.
        """
        perm = [mapping[v] for v in range(1, self.n + 1)] if isinstance(mapping, dict) \
            else list(mapping)
        if sorted(perm) != list(range(1, self.n + 1)):
            raise ValueError("relabel mapping must be a permutation of 1..n")
        rows = [0] * self.n
        for i, r in enumerate(self.rows):
            new = 0
            while r:
                low = r & -r
                new |= 1 << (perm[low.bit_length() - 1] - 1)
                r ^= low
            rows[perm[i] - 1] = new
        return Graph._trusted(rows)

    def induced(self, keep: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Subgraph on ``keep`` (1-based labels, order preserved) and old→new map."""
        keep = list(keep)
        if not keep:
            raise ValueError("cannot induce an empty graph")
        mapping = {old: new for new, old in enumerate(keep, start=1)}
        rows = []
        for old in keep:
            r = self.rows[old - 1]
            new = 0
            for o2, n2 in mapping.items():
                if (r >> (o2 - 1)) & 1:
                    new |= 1 << (n2 - 1)
            rows.append(new)
        return Graph._trusted(rows), mapping

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} out of range 1..{self.n}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def _bits_to_labels(r: int) -> list[int]:
    out = []
    while r:
        low = r & -r
        out.append(low.bit_length())
        r ^= low
    return out


def _lc_rows(rows: list[int], i: int) -> None:
    """In-place local complementation about 0-based vertex ``i``."""
    nb = rows[i]
    r = nb
    while r:
        low = r & -r
        j = low.bit_length() - 1
        rows[j] ^= nb ^ low
        r ^= low


def local_complement(g: Graph, v: int) -> Graph:
    """Toggle every edge between two neighbours of ``v``."""
    g._check(v)
    rows = list(g.rows)
    _lc_rows(rows, v - 1)
    return Graph._trusted(rows)


def pivot(g: Graph, v: int, w: int) -> Graph:
    """Edge pivot ``g*v*w*v`` along the edge ``(v, w)``."""
    if not g.has_edge(v, w):
        raise ValueError(f"({v}, {w}) is not an edge")
    rows = list(g.rows)
    _lc_rows(rows, v - 1)
    _lc_rows(rows, w - 1)
    _lc_rows(rows, v - 1)
    return Graph._trusted(rows)


def _delete(rows: Sequence[int], i: int) -> list[int]:
    low_mask = (1 << i) - 1
    out = []
    for j, r in enumerate(rows):
        if j == i:
            continue
        out.append((r & low_mask) | ((r >> (i + 1)) << i))
    return out


def vertex_minor(g: Graph, v: int, kind: str, w: Optional[int] = None
                 ) -> tuple[Optional[Graph], dict[int, int]]:
    """Delete ``v`` after an optional local operation.

    ``kind`` is ``"Z"`` (plain deletion), ``"Y"`` (complement about ``v``
    first) or ``"X"`` (pivot along ``(v, w)`` first). Returns the minor on
    the compacted labels ``1..n-1`` and the old→new label map. A one-vertex
    input yields ``(None, {})``.
    """
    g._check(v)
    rows = list(g.rows)
    if kind == "Y":
        _lc_rows(rows, v - 1)
    elif kind == "X":
        if w is None or not g.has_edge(v, w):
            raise ValueError("X-type minor needs a neighbour w of v")
        _lc_rows(rows, v - 1)
        _lc_rows(rows, w - 1)
        _lc_rows(rows, v - 1)
    elif kind != "Z":
        raise ValueError(f"unknown minor kind {kind!r}")
    mapping = {old: (old if old < v else old - 1) for old in range(1, g.n + 1) if old != v}
    if g.n == 1:
        return None, {}
    return Graph._trusted(_delete(rows, v - 1)), mapping


def _components_rows(rows: Sequence[int]) -> list[int]:
    n = len(rows)
    unseen = (1 << n) - 1
    comps = []
    while unseen:
        start = unseen & -unseen
        comp = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = rows[low.bit_length() - 1] & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        unseen &= ~comp
    return comps


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Vertex sets of the connected components, ordered by smallest member."""
    return [frozenset(_bits_to_labels(c)) for c in _components_rows(g.rows)]


# ---------------------------------------------------------------- isomorphism

def _refine(rows: Sequence[int], rounds: Optional[int] = None) -> list[int]:
    """Colour refinement with deterministic hashing (comparable across graphs)."""
    n = len(rows)
    colors = [r.bit_count() for r in rows]
    classes = len(set(colors))
    for _ in range(rounds if rounds is not None else n):
        new = []
        for r in rows:
            nb = []
            while r:
                low = r & -r
                nb.append(colors[low.bit_length() - 1])
                r ^= low
            nb.sort()
            new.append(hash((colors[len(new)], tuple(nb))))
        colors = new
        c2 = len(set(colors))
        if c2 == classes and rounds is None:
            break
        classes = c2
    return colors


def invariant_hash(g: Graph) -> int:
    """Isomorphism-invariant fingerprint (equal for isomorphic graphs)."""
    return hash((g.n, g.num_edges, tuple(sorted(_refine(g.rows, rounds=3)))))


def find_isomorphism(g1: Graph, g2: Graph) -> Optional[dict[int, int]]:
    """Return a vertex map ``g1 → g2`` preserving edges, or ``None``."""
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return None
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return None
    n = g1.n
    rounds = n
    c1 = _refine(g1.rows, rounds)
    c2 = _refine(g2.rows, rounds)
    if sorted(c1) != sorted(c2):
        return None
    r1, r2 = g1.rows, g2.rows
    by_color: dict[int, list[int]] = {}
    for j, c in enumerate(c2):
        by_color.setdefault(c, []).append(j)

    # Order g1's vertices: rarest colour first, then stay adjacent to placed ones.
    remaining = set(range(n))
    order: list[int] = []
    placed = 0
    while remaining:
        best = min(remaining, key=lambda v: (-(r1[v] & placed).bit_count(),
                                             len(by_color[c1[v]]), v))
        order.append(best)
        placed |= 1 << best
        remaining.discard(best)

    image = [-1] * n
    used = 0
    mapped_mask = 0

    def extend(k: int) -> bool:
        nonlocal used, mapped_mask
        if k == n:
            return True
        v = order[k]
        need = r1[v] & mapped_mask
        for w in by_color[c1[v]]:
            if (used >> w) & 1:
                continue
            # adjacency to already-mapped vertices must agree
            ok = True
            m = mapped_mask
            while m:
                low = m & -m
                u = low.bit_length() - 1
                m ^= low
                if bool((need >> u) & 1) != bool((r2[w] >> image[u]) & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used |= 1 << w
            mapped_mask |= 1 << v
            if extend(k + 1):
                return True
            image[v] = -1
            used &= ~(1 << w)
            mapped_mask &= ~(1 << v)
        return False

    if not extend(0):
        return None
    return {v + 1: image[v] + 1 for v in range(n)}


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    return find_isomorphism(g1, g2) is not None


# ---------------------------------------------------------------- families

def _rgs_leaves_rows(n: int, leaves: int) -> list[tuple[int, int]]:
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    nxt = n + 1
    for core in range(1, n + 1):
        for _ in range(leaves):
            edges.append((core, nxt))
            nxt += 1
    return edges


def make_family(kind: str, n: int, leaves: int = 1) -> Graph:
    """Labelled instance of a named graph family.

    kinds: ``path`` (n vertices), ``cycle``, ``complete``, ``star`` (vertex 1
    is the centre, n vertices total), ``rgs`` (cores ``1..n`` then leaf
    ``n+i`` of core ``i``), ``rgs_many_leaves`` (cores ``1..n``, the leaves of
    core ``i`` follow in blocks), ``wheel`` (hub ``1`` plus an n-cycle, so
    ``wheel 5`` is the 6-vertex W5), ``bw3`` (wheel on a triangle with every
    rim edge subdivided; ``n`` ignored).
    """
    if kind == "path":
        _need(n >= 1, kind, n)
        return Graph(n, [(i, i + 1) for i in range(1, n)])
    if kind == "cycle":
        _need(n >= 3, kind, n)
        return Graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])
    if kind == "complete":
        _need(n >= 1, kind, n)
        return Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])
    if kind == "star":
        _need(n >= 1, kind, n)
        return Graph(n, [(1, j) for j in range(2, n + 1)])
    if kind == "rgs":
        _need(n >= 2, kind, n)
        return Graph(2 * n, _rgs_leaves_rows(n, 1))
    if kind == "rgs_many_leaves":
        _need(n >= 2 and leaves >= 1, kind, n)
        return Graph(n * (1 + leaves), _rgs_leaves_rows(n, leaves))
    if kind == "wheel":
        _need(n >= 3, kind, n)
        rim = [(i, i + 1) for i in range(2, n + 1)] + [(2, n + 1)]
        return Graph(n + 1, rim + [(1, j) for j in range(2, n + 2)])
    if kind == "bw3":
        # hub 1, rim 2,3,4, subdivision vertices 5 (2-3), 6 (3-4), 7 (4-2)
        return Graph(7, [(1, 2), (1, 3), (1, 4), (2, 5), (5, 3), (3, 6), (6, 4), (4, 7), (7, 2)])
    raise ValueError(f"unknown graph family {kind!r}")


def _need(cond: bool, kind: str, n: int) -> None:
    if not cond:
        raise ValueError(f"invalid size {n} for family {kind!r}")


def _graph_from_labels(n_vertices: int, edges_by_id: list[tuple[int, int]],
                       label_of: dict[int, int]) -> Graph:
    return Graph(n_vertices, [(label_of[a], label_of[b]) for a, b in edges_by_id])


def rgs_natural_ordering(n: int) -> Graph:
    """RGS with labels in emission order core 1, its leaf, core 2, its leaf, ..."""
    if n < 2:
        raise ValueError("rgs needs n >= 2")
    # vertex ids: core i -> i, leaf i -> n+i (as make_family); emission labels interleave
    label_of = {}
    for i in range(1, n + 1):
        label_of[i] = 2 * i - 1
        label_of[n + i] = 2 * i
    return _graph_from_labels(2 * n, _rgs_leaves_rows(n, 1), label_of)


def rgs_ordering(n: int) -> Graph:
    """RGS labelled by a two-emitter emission order.

    Natural order (core, leaf, core, leaf, ...) with the labels of the
    second-to-last core and the last leaf exchanged.
    """
    if n < 3:
        raise ValueError("rgs_ordering needs n >= 3")
    g = rgs_natural_ordering(n)
    swap_a, swap_b = 2 * (n - 1) - 1, 2 * n
    perm = list(range(1, 2 * n + 1))
    perm[swap_a - 1], perm[swap_b - 1] = swap_b, swap_a
    return g.relabel(perm)


def rgs_many_leaves_ordering(n: int, leaves: int) -> Graph:
    """Multi-leaf RGS labelled by a two-emitter emission order.

    Each core's block is emitted as ``leaves..., core``; for every core after
    the first, the core exchanges labels with its first leaf.
    """
    if n < 3 or leaves < 1:
        raise ValueError("rgs_many_leaves_ordering needs n >= 3 and leaves >= 1")
    block = leaves + 1
    label_of = {}
    for i in range(1, n + 1):
        start = (i - 1) * block
        leaf_ids = [n + (i - 1) * leaves + k for k in range(1, leaves + 1)]
        for k, lid in enumerate(leaf_ids):
            label_of[lid] = start + k + 1
        label_of[i] = start + block
        if i >= 2:
            first_leaf = leaf_ids[0]
            label_of[i], label_of[first_leaf] = label_of[first_leaf], label_of[i]
    return _graph_from_labels(n * block, _rgs_leaves_rows(n, leaves), label_of)


def rgs_encoded_ordering(n: int, leaves: int) -> Graph:
    """Tree-encoded RGS labelled by a two-emitter emission order.

    ``n`` (even) cores form a complete graph; cores are paired, each pair
    shares a top vertex adjacent to both, and each core carries ``leaves``
    leaves. Per pair the emission block is ``core, its leaves, core, its
    leaves, top``; from the second pair on, the second core and the top
    vertex exchange labels.
    """
    if n % 2 or n < 4:
        raise ValueError("rgs_encoded_ordering needs an even n >= 4")
    if leaves < 1:
        raise ValueError("rgs_encoded_ordering needs leaves >= 1")
    edges: list[tuple[int, int]] = []
    cores: list[int] = []
    label = 0
    for t in range(n // 2):
        a = label + 1
        a_leaves = list(range(a + 1, a + 1 + leaves))
        b = a + leaves + 1
        b_leaves = list(range(b + 1, b + 1 + leaves))
        top = b + leaves + 1
        label = top
        if t >= 1:
            b, top = top, b
        edges += [(a, x) for x in a_leaves] + [(b, x) for x in b_leaves]
        edges += [(top, a), (top, b)]
        cores += [a, b]
    edges += [(u, v) for i, u in enumerate(cores) for v in cores[i + 1:]]
    return Graph(label, edges)


# ---------------------------------------------------------------- generators

def random_connected_graph(n: int, p: float, rng: random.Random, max_tries: int = 100000
                           ) -> Graph:
    """Erdős–Rényi G(n, p), resampled until connected."""
    if not 0 < p < 1:
        raise ValueError("edge probability must lie in (0, 1)")
    for _ in range(max_tries):
        edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                 if rng.random() < p]
        g = Graph(n, edges)
        if n == 1 or g.is_connected():
            return g
    raise RuntimeError("could not sample a connected graph; p too small?")


def all_labeled_graphs(n: int, connected_only: bool = True) -> Iterator[Graph]:
    """Every labelled graph on ``n`` vertices (2^(n(n-1)/2) of them)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        m = mask
        k = 0
        while m:
            if m & 1:
                i, j = pairs[k]
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            m >>= 1
            k += 1
        if connected_only and len(_components_rows(rows)) != 1:
            continue
        yield Graph._trusted(rows)


# ---------------------------------------------------------------- text format

def parse_graph(text: str) -> Graph:
    """Parse edge-pair or dense-matrix text (``#`` starts a comment)."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line.split())
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must hold the vertex count")
    try:
        n = int(lines[0][0])
        body = [[int(tok) for tok in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise ValueError(f"malformed graph text: {exc}") from None
    if n < 1:
        raise ValueError("vertex count must be positive")
    if len(body) == n and all(len(r) == n for r in body) and n != 2:
        dense = True
    elif n == 2 and len(body) == 2 and all(len(r) == 2 for r in body):
        dense = True
    else:
        dense = False
    if dense:
        for i in range(n):
            for j in range(n):
                if body[i][j] not in (0, 1) or body[i][j] != body[j][i] or (i == j and body[i][j]):
                    raise ValueError("dense block must be a symmetric 0/1 matrix with zero diagonal")
        return Graph(n, [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if body[i][j]])
    edges = []
    for r in body:
        if len(r) != 2:
            raise ValueError(f"edge line must have two labels, got {r}")
        u, v = r
        if u == v:
            raise ValueError(f"self-loop on vertex {u}")
        edges.append((min(u, v), max(u, v)))
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    out = [str(g.n)]
    out += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(out) + "\n"
