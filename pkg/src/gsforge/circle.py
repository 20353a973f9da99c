"""Circle-graph recognition through splits and prime vertex-minor reduction.

A circle graph is certified by a double-occurrence word: two letters
alternate (``v..w..v..w`` cyclically) exactly when the vertices are adjacent.
"""

from __future__ import annotations

from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from gsforge.graphs import (
    Graph,
    connected_components,
    find_isomorphism,
    local_complement,
    make_family,
    pivot,
)

__all__ = [
    "Split",
    "find_split",
    "is_prime",
    "validate_word",
    "word_local_complement",
    "canonical_word",
    "word_from_graph",
    "is_circle",
    "chord_oracle_is_circle",
    "chord_oracle_word",
    "RecognitionResult",
    "recognize",
]


@dataclass(frozen=True)
class Split:
    v1: frozenset
    v2: frozenset
    a: frozenset
    b: frozenset


# ---------------------------------------------------------------- words

def _positions(word: Sequence[Hashable]) -> dict:
    pos: dict = {}
    for i, x in enumerate(word):
        pos.setdefault(x, []).append(i)
    return pos


def _interlace(pos: dict, u, v) -> bool:
    a1, a2 = pos[u]
    b1, b2 = pos[v]
    return (a1 < b1 < a2) != (a1 < b2 < a2)


def validate_word(word: Sequence[int], g: Graph) -> bool:
    """True iff the alternances of ``word`` are exactly the edges of ``g``."""
    pos = _positions(word)
    if sorted(pos) != list(range(1, g.n + 1)) or any(len(p) != 2 for p in pos.values()):
        raise ValueError("word must contain every vertex exactly twice")
    for u in range(1, g.n + 1):
        for v in range(u + 1, g.n + 1):
            if _interlace(pos, u, v) != g.has_edge(u, v):
                return False
    return True


def word_local_complement(word: Sequence, v) -> list:
    """Word for ``G*v``: reverse the stretch between the two copies of ``v``."""
    i, j = _positions(word)[v]
    w = list(word)
    w[i + 1:j] = reversed(w[i + 1:j])
    return w


def canonical_word(word: Sequence) -> list:
    """Rotate so the first copy of the smallest letter leads."""
    if not word:
        return []
    i = list(word).index(min(word))
    return list(word[i:]) + list(word[:i])


# ---------------------------------------------------------------- chord oracle

def chord_oracle_word(g: Graph, max_n: int = 8) -> Optional[list[int]]:
    """Exhaustive search for any valid word, with vertex 1 placed first.

    Letters are written left to right; when a letter is closed its whole
    neighbourhood is already determined, so it is checked right there.
    """
    n = g.n
    if n > max_n:
        raise ValueError(f"chord oracle limited to n <= {max_n}")
    rows = g.rows
    word = [0] * (2 * n)
    first = [-1] * n
    second = [-1] * n

    def close_ok(v: int, p: int) -> bool:
        start = first[v]
        nb = 0
        for u in range(n):
            f = first[u]
            if u == v or f < 0:
                continue
            if second[u] >= 0:
                inter = (start < f) != (start < second[u])
            else:
                inter = f > start
            if inter:
                nb |= 1 << u
        return nb == rows[v]

    def rec(p: int) -> bool:
        if p == 2 * n:
            return True
        for v in range(n):
            if first[v] >= 0 and second[v] < 0 and close_ok(v, p):
                second[v] = p
                word[p] = v
                if rec(p + 1):
                    return True
                second[v] = -1
        for v in range(n if p else 1):
            if first[v] < 0:
                first[v] = p
                word[p] = v
                if rec(p + 1):
                    return True
                first[v] = -1
        return False

    if not rec(0):
        return None
    return [x + 1 for x in word]


def chord_oracle_is_circle(g: Graph, max_n: int = 8) -> bool:
    return chord_oracle_word(g, max_n) is not None


# ---------------------------------------------------------------- splits

def find_split(g: Graph) -> Optional[Split]:
    """First split found by brute force (``None`` means prime)."""
    if g.n < 4:
        raise ValueError("splits need at least four vertices")
    n = g.n
    rows = g.rows
    full = (1 << n) - 1
    others = list(range(1, n))
    for size in range(1, n - 2):
        for rest in combinations(others, size):
            v1 = 1
            for x in rest:
                v1 |= 1 << x
            v2 = full & ~v1
            a = b = 0
            m = v1
            while m:
                low = m & -m
                m ^= low
                i = low.bit_length() - 1
                cross = rows[i] & v2
                if cross:
                    a |= low
                    b |= cross
            ok = True
            m = a
            while m:
                low = m & -m
                m ^= low
                if rows[low.bit_length() - 1] & v2 != b:
                    ok = False
                    break
            if ok:
                def labels(mask: int) -> frozenset:
                    return frozenset(i + 1 for i in range(n) if (mask >> i) & 1)
                return Split(labels(v1), labels(v2), labels(a), labels(b))
    return None


def is_prime(g: Graph) -> bool:
    """Connected with no split (graphs under four vertices count as prime)."""
    if len(connected_components(g)) != 1:
        return False
    return g.n < 4 or find_split(g) is None


# ---------------------------------------------------------------- recognition

@lru_cache(maxsize=1)
def _c5_orbit() -> tuple:
    c5 = make_family("cycle", 5)
    word = chord_oracle_word(c5)
    assert word is not None
    seen = {c5.rows}
    out = [(c5, word)]
    for g, w in out:
        for v in range(1, 6):
            h = local_complement(g, v)
            if h.rows not in seen:
                seen.add(h.rows)
                out.append((h, word_local_complement(w, v)))
    return tuple(out)


def _base_prime5(g: Graph) -> Optional[list[int]]:
    for member, word in _c5_orbit():
        iso = find_isomorphism(g, member)
        if iso is not None:
            back = {b: a for a, b in iso.items()}
            cand = [back[x] for x in word]
            if validate_word(cand, g):
                return cand
    return None


def _insert_pairs(base: list, v, target: Graph) -> Optional[list]:
    m = len(base)
    for i in range(m + 1):
        for j in range(i, m + 1):
            cand = base[:i] + [v] + base[i:j] + [v] + base[j:]
            if validate_word(cand, target):
                return cand
    return None


def _minor(g: Graph, v: int, kind: str, w: Optional[int]) -> tuple[Graph, Graph]:
    """Returns ``(g', minor)`` where ``minor = g' \\ v``."""
    if kind == "Z":
        gp = g
    elif kind == "Y":
        gp = local_complement(g, v)
    else:
        gp = pivot(g, v, w)
    keep = [x for x in range(1, g.n + 1) if x != v]
    return gp, gp.induced(keep)[0]


def _word_connected(g: Graph) -> Optional[list[int]]:
    n = g.n
    if n <= 3:
        return chord_oracle_word(g)
    split = find_split(g)
    if split is not None:
        return _word_from_split(g, split)
    if n == 4:
        return chord_oracle_word(g)
    if n == 5:
        return _base_prime5(g)
    for v in range(1, n + 1):
        options = [("Z", None), ("Y", None)] + [("X", w) for w in g.neighbors(v)]
        for kind, w in options:
            gp, minor = _minor(g, v, kind, w)
            if not is_prime(minor):
                continue
            sub = _word_connected(minor)
            if sub is None:
                return None
            keep = [x for x in range(1, n + 1) if x != v]
            base = [keep[x - 1] for x in sub]
            ext = _insert_pairs(base, v, gp)
            if ext is None:
                return None
            if kind == "Y":
                ext = word_local_complement(ext, v)
            elif kind == "X":
                for x in (v, w, v):
                    ext = word_local_complement(ext, x)
            return ext
    raise RuntimeError("prime graph without a prime vertex-minor")


def _word_from_split(g: Graph, split: Split) -> Optional[list[int]]:
    halves = []
    for side, front in ((split.v1, split.a), (split.v2, split.b)):
        keep = sorted(side)
        sub, mapping = g.induced(keep)
        d = sub.n + 1
        edges = sub.edges() + [(mapping[x], d) for x in sorted(front)]
        part = Graph(d, edges)
        w = _word_connected(part)
        if w is None:
            return None
        i = w.index(d)
        w = w[i:] + w[:i]
        j = w.index(d, 1)
        inv = {new: old for old, new in mapping.items()}
        halves.append(([inv[x] for x in w[1:j]], [inv[x] for x in w[j + 1:]]))
    (a1, b1), (a2, b2) = halves
    return a1 + a2 + b1 + b2


def word_from_graph(g: Graph) -> Optional[list[int]]:
    """A validated alternance word for ``g``, or ``None`` when ``g`` is not a circle graph."""
    parts = []
    for comp in connected_components(g):
        keep = sorted(comp)
        sub, _ = g.induced(keep)
        w = _word_connected(sub)
        if w is None:
            return None
        parts += [keep[x - 1] for x in w]
    if not validate_word(parts, g):
        raise AssertionError("recognizer produced an invalid word")
    return canonical_word(parts)


def is_circle(g: Graph) -> bool:
    return word_from_graph(g) is not None


@dataclass
class RecognitionResult:
    is_circle: bool
    word: Optional[list[int]]
    prime: bool
    split: Optional[Split]

    def to_dict(self) -> dict:
        return {
            "is_circle": self.is_circle,
            "word": self.word,
            "prime": self.prime,
            "split": None if self.split is None else {
                "v1": sorted(self.split.v1), "v2": sorted(self.split.v2),
                "a": sorted(self.split.a), "b": sorted(self.split.b),
            },
        }


def recognize(g: Graph) -> RecognitionResult:
    word = word_from_graph(g)
    connected = len(connected_components(g)) == 1
    split = find_split(g) if connected and g.n >= 4 else None
    return RecognitionResult(word is not None, word, connected and split is None, split)
