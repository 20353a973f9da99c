# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tableau kernels; same contract as ``_pykernels``.

Rows are unpacked into little-endian uint64 words, processed in C, and packed
back into Python ints.
"""

from libc.stdint cimport uint64_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

from gsforge._pykernels import product_sign  # noqa: F401  (re-exported)

BACKEND = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef struct Rows:
    int n
    int words
    uint64_t *x
    uint64_t *z
    uint8_t *s
    int *order


cdef int _load(Rows *t, list xs, list zs, list signs, int ncols) except -1:
    cdef int n = len(xs)
    cdef int w = (ncols + 63) // 64
    cdef int i
    cdef bytes bx, bz
    if w < 1:
        w = 1
    t.n = n
    t.words = w
    t.x = <uint64_t *> malloc(n * w * sizeof(uint64_t) + 8)
    t.z = <uint64_t *> malloc(n * w * sizeof(uint64_t) + 8)
    t.s = <uint8_t *> malloc(n + 1)
    t.order = <int *> malloc((n + 1) * sizeof(int))
    if not t.x or not t.z or not t.s or not t.order:
        raise MemoryError()
    for i in range(n):
        bx = (<object> xs[i]).to_bytes(8 * w, "little")
        bz = (<object> zs[i]).to_bytes(8 * w, "little")
        memcpy(&t.x[i * w], <char *> bx, 8 * w)
        memcpy(&t.z[i * w], <char *> bz, 8 * w)
        t.s[i] = <uint8_t> signs[i]
        t.order[i] = i
    return 0


cdef void _store(Rows *t, list xs, list zs, list signs):
    cdef int i, r, w = t.words
    for i in range(t.n):
        r = t.order[i]
        xs[i] = int.from_bytes((<char *> &t.x[r * w])[:8 * w], "little")
        zs[i] = int.from_bytes((<char *> &t.z[r * w])[:8 * w], "little")
        signs[i] = t.s[r]


cdef void _release(Rows *t):
    free(t.x)
    free(t.z)
    free(t.s)
    free(t.order)


cdef int _rowsum(Rows *t, int dest, int src) except -1:
    # dest, src are storage indices
    cdef int k, w = t.words
    cdef uint64_t x1, z1, x2, z2, anti, plus
    cdef long cnt_anti = 0, cnt_plus = 0, total
    cdef uint64_t *dx = &t.x[dest * w]
    cdef uint64_t *dz = &t.z[dest * w]
    cdef uint64_t *sx = &t.x[src * w]
    cdef uint64_t *sz = &t.z[src * w]
    for k in range(w):
        x1 = dx[k]; z1 = dz[k]; x2 = sx[k]; z2 = sz[k]
        anti = (x1 & z2) ^ (x2 & z1)
        if anti:
            plus = anti & ((x1 & ~z1 & x2) | (x1 & z1 & ~x2) | (~x1 & z1 & ~z2))
            cnt_anti += __builtin_popcountll(anti)
            cnt_plus += __builtin_popcountll(plus)
        dx[k] = x1 ^ x2
        dz[k] = z1 ^ z2
    total = (2 * t.s[dest] + 2 * t.s[src] + 2 * cnt_plus - cnt_anti) % 4
    if total < 0:
        total += 4
    if total & 1:
        raise ArithmeticError("rowsum produced an imaginary phase; rows anticommute")
    t.s[dest] = <uint8_t> (total >> 1)
    return 0


cdef inline int _weight(Rows *t, int r):
    cdef int k, c = 0, w = t.words
    for k in range(w):
        c += __builtin_popcountll(t.x[r * w + k] | t.z[r * w + k])
    return c


cdef inline int _weight_xor(Rows *t, int r, int p):
    cdef int k, c = 0, w = t.words
    for k in range(w):
        c += __builtin_popcountll((t.x[r * w + k] ^ t.x[p * w + k]) | (t.z[r * w + k] ^ t.z[p * w + k]))
    return c


def rowsum(list xs, list zs, list signs, int dest, int src):
    from gsforge._pykernels import rowsum as _r
    _r(xs, zs, signs, dest, src)


cdef inline void _swap_order(Rows *t, int i, int j):
    cdef int tmp
    if i != j:
        tmp = t.order[i]
        t.order[i] = t.order[j]
        t.order[j] = tmp


def rref(list xs, list zs, list signs, int ncols):
    cdef Rows t
    cdef int n = len(xs)
    cdef int top = 0, c, r, i, word, p1, p2, nx, nz, w
    cdef uint64_t bit
    cdef int *xrows
    cdef int *zrows
    if n == 0:
        return
    _load(&t, xs, zs, signs, ncols)
    w = t.words
    xrows = <int *> malloc(n * sizeof(int))
    zrows = <int *> malloc(n * sizeof(int))
    try:
        for c in range(ncols):
            if top >= n:
                break
            word = c >> 6
            bit = (<uint64_t> 1) << (c & 63)
            nx = 0
            nz = 0
            for i in range(top, n):
                r = t.order[i]
                if t.x[r * w + word] & bit:
                    xrows[nx] = i
                    nx += 1
                elif t.z[r * w + word] & bit:
                    zrows[nz] = i
                    nz += 1
            if nx == 0 and nz == 0:
                continue
            p2 = -1
            if nx > 0:
                p1 = xrows[0]
                for i in range(1, nx):
                    _rowsum(&t, t.order[xrows[i]], t.order[p1])
                    if t.z[t.order[xrows[i]] * w + word] & bit:
                        zrows[nz] = xrows[i]
                        nz += 1
                _sort_ints(zrows, nz)
                if nz > 0:
                    p2 = zrows[0]
                    for i in range(1, nz):
                        _rowsum(&t, t.order[zrows[i]], t.order[p2])
            else:
                p1 = zrows[0]
                for i in range(1, nz):
                    _rowsum(&t, t.order[zrows[i]], t.order[p1])
            _swap_order(&t, top, p1)
            if p2 >= 0:
                if p2 == top:
                    p2 = p1
                _swap_order(&t, top + 1, p2)
                top += 2
            else:
                top += 1
        _store(&t, xs, zs, signs)
    finally:
        free(xrows)
        free(zrows)
        _release(&t)


cdef void _sort_ints(int *a, int m):
    cdef int i, j, v
    for i in range(1, m):
        v = a[i]
        j = i - 1
        while j >= 0 and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


def back_substitute(list xs, list zs, list signs, int exit_row=0, int ncols=-1):
    cdef Rows t
    cdef int n = len(xs)
    cdef int pivot, k, w0, wa
    if n == 0:
        return
    if ncols < 0:
        ncols = 1
        for v in xs:
            ncols = max(ncols, (<object> v).bit_length())
        for v in zs:
            ncols = max(ncols, (<object> v).bit_length())
    _load(&t, xs, zs, signs, ncols)
    try:
        for pivot in range(n - 1, exit_row, -1):
            for k in range(pivot - 1, -1, -1):
                w0 = _weight(&t, k)
                if w0 > 1:
                    wa = _weight_xor(&t, k, pivot)
                    if wa <= w0:
                        _rowsum(&t, k, pivot)
        _store(&t, xs, zs, signs)
    finally:
        _release(&t)


def gf2_rank(rows):
    from gsforge._pykernels import gf2_rank as _g
    return _g(rows)


def graph_adjacency(list xs, list zs, int n):
    cdef Rows t
    cdef int w, r, c, top = 0, k, word, tmp
    cdef uint64_t bit, d
    cdef uint64_t *px
    cdef uint64_t *pz
    cdef uint64_t *qx
    cdef uint64_t *qz
    _load(&t, xs, zs, [0] * len(xs), n)
    w = t.words
    cdef uint8_t *piv = <uint8_t *> malloc(n + 1)
    if not piv:
        _release(&t)
        raise MemoryError()
    try:
        for c in range(n):
            piv[c] = 0
        # rows are addressed through t.order so swaps stay cheap
        for c in range(n):
            word = c >> 6
            bit = (<uint64_t> 1) << (c & 63)
            r = top
            while r < n and not (t.x[t.order[r] * w + word] & bit):
                r += 1
            if r == n:
                continue
            _swap_order(&t, top, r)
            px = &t.x[t.order[top] * w]
            pz = &t.z[t.order[top] * w]
            for r in range(n):
                if r != top:
                    qx = &t.x[t.order[r] * w]
                    if qx[word] & bit:
                        qz = &t.z[t.order[r] * w]
                        for k in range(w):
                            qx[k] ^= px[k]
                            qz[k] ^= pz[k]
            piv[c] = 1
            top += 1
        for c in range(n):
            if not piv[c]:
                word = c >> 6
                bit = (<uint64_t> 1) << (c & 63)
                for r in range(n):
                    d = (t.x[r * w + word] ^ t.z[r * w + word]) & bit
                    t.x[r * w + word] ^= d
                    t.z[r * w + word] ^= d
        for c in range(n):
            word = c >> 6
            bit = (<uint64_t> 1) << (c & 63)
            r = c
            while r < n and not (t.x[t.order[r] * w + word] & bit):
                r += 1
            if r == n:
                raise ValueError("tableau generators are dependent")
            _swap_order(&t, c, r)
            px = &t.x[t.order[c] * w]
            pz = &t.z[t.order[c] * w]
            for r in range(n):
                if r != c:
                    qx = &t.x[t.order[r] * w]
                    if qx[word] & bit:
                        qz = &t.z[t.order[r] * w]
                        for k in range(w):
                            qx[k] ^= px[k]
                            qz[k] ^= pz[k]
        out = []
        for c in range(n):
            r = t.order[c]
            out.append(int.from_bytes((<char *> &t.z[r * w])[:8 * w], "little") & ~(1 << <object> c))
        return out
    finally:
        free(piv)
        _release(&t)
