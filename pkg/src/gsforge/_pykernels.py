"""Pure-Python tableau kernels over int-bitset rows.

Every function mutates its list arguments in place. Row ``i`` of a tableau is
``(xs[i], zs[i], signs[i])`` where bit ``q`` of ``xs[i]``/``zs[i]`` is the X/Z
component on qubit ``q`` and ``signs[i]`` is 0 for +1 and 1 for -1.

The compiled module ``_ckernels`` implements the same functions with the same
results; ``gsforge.kernels`` picks one at import time.
"""

from __future__ import annotations

BACKEND = "python"


def product_sign(x1: int, z1: int, s1: int, x2: int, z2: int, s2: int) -> int:
    """Sign bit of the product ``P1 * P2`` of two commuting signed Paulis.

    Counts, over positions where the two factors anticommute, how many give
    a ``+i`` (X*Y, Y*Z, Z*X) and how many a ``-i``.
    """
    anti = (x1 & z2) ^ (x2 & z1)
    if not anti:
        return s1 ^ s2
    plus = anti & ((x1 & ~z1 & x2) | (x1 & z1 & ~x2) | (~x1 & z1 & ~z2))
    p = plus.bit_count()
    total = (2 * s1 + 2 * s2 + 2 * p - anti.bit_count()) % 4
    if total & 1:
        raise ArithmeticError("rowsum produced an imaginary phase; rows anticommute")
    return total >> 1


def rowsum(xs: list, zs: list, signs: list, dest: int, src: int) -> None:
    x1, z1, x2, z2 = xs[dest], zs[dest], xs[src], zs[src]
    signs[dest] = product_sign(x1, z1, signs[dest], x2, z2, signs[src])
    xs[dest] = x1 ^ x2
    zs[dest] = z1 ^ z2


def _swap(xs, zs, signs, i, j):
    if i != j:
        xs[i], xs[j] = xs[j], xs[i]
        zs[i], zs[j] = zs[j], zs[i]
        signs[i], signs[j] = signs[j], signs[i]


def rref(xs: list, zs: list, signs: list, ncols: int) -> None:
    """Row-reduce into echelon gauge.

    Columns are scanned left to right. At each column the first remaining row
    with X or Y becomes the first pivot, the first remaining row with Z (after
    clearing) the second; every other row loses its support on that column.
    """
    n = len(xs)
    top = 0
    for c in range(ncols):
        if top >= n:
            break
        bit = 1 << c
        xrows = []
        zrows = []
        for r in range(top, n):
            if xs[r] & bit:
                xrows.append(r)
            elif zs[r] & bit:
                zrows.append(r)
        if not xrows and not zrows:
            continue
        if xrows:
            p1 = xrows[0]
            for r in xrows[1:]:
                rowsum(xs, zs, signs, r, p1)
                if zs[r] & bit:
                    zrows.append(r)
            zrows.sort()
        else:
            p1 = zrows.pop(0)
        p2 = -1
        if xrows and zrows:
            p2 = zrows.pop(0)
        for r in zrows:
            rowsum(xs, zs, signs, r, p2 if p2 >= 0 else p1)
        _swap(xs, zs, signs, top, p1)
        if p2 >= 0:
            if p2 == top:
                p2 = p1
            _swap(xs, zs, signs, top + 1, p2)
            top += 2
        else:
            top += 1


def back_substitute(xs: list, zs: list, signs: list, exit_row: int = 0, ncols: int = -1) -> None:
    """Weight-reducing multiplication of upper rows by lower rows.

    ``exit_row`` is 0-based: lower rows ``n-1 .. exit_row+1`` act as
    multipliers on every row above them. A product replaces the upper row
    when its weight does not exceed the original weight (rows of weight 1
    are never touched).
    """
    n = len(xs)
    for pivot in range(n - 1, exit_row, -1):
        px, pz = xs[pivot], zs[pivot]
        for k in range(pivot - 1, -1, -1):
            w0 = (xs[k] | zs[k]).bit_count()
            if w0 > 1:
                wa = ((xs[k] ^ px) | (zs[k] ^ pz)).bit_count()
                if wa <= w0:
                    rowsum(xs, zs, signs, k, pivot)


def gf2_rank(rows) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for v in rows:
        while v:
            h = v.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = v
                rank += 1
                break
            v ^= p
    return rank


def graph_adjacency(xs: list[int], zs: list[int], n: int) -> list[int]:
    """Graph adjacency of an n-qubit stabilizer state, ignoring phases.

    X-part elimination, Hadamard (an X/Z bit swap) on every non-pivot column,
    Gauss-Jordan on X, then the Z part minus its diagonal is the graph.
    """
    xs, zs = list(xs), list(zs)
    top = 0
    pivots = 0
    for c in range(n):
        b = 1 << c
        for r in range(top, n):
            if xs[r] & b:
                break
        else:
            continue
        xs[top], xs[r] = xs[r], xs[top]
        zs[top], zs[r] = zs[r], zs[top]
        for r in range(n):
            if r != top and xs[r] & b:
                xs[r] ^= xs[top]
                zs[r] ^= zs[top]
        pivots |= b
        top += 1
    flip = ((1 << n) - 1) & ~pivots
    if flip:
        for r in range(n):
            d = (xs[r] ^ zs[r]) & flip
            xs[r] ^= d
            zs[r] ^= d
    for c in range(n):
        b = 1 << c
        for r in range(c, n):
            if xs[r] & b:
                break
        else:
            raise ValueError("tableau generators are dependent")
        xs[c], xs[r] = xs[r], xs[c]
        zs[c], zs[r] = zs[r], zs[c]
        for r in range(n):
            if r != c and xs[r] & b:
                xs[r] ^= xs[c]
                zs[r] ^= zs[c]
    return [zs[c] & ~(1 << c) for c in range(n)]
