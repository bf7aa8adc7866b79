# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the routines in ``_pykernels``."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free

from . import _pykernels

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef enum:
    MAXLEN = 64
    BITMAP_MAX_BITS = 26


cdef inline int popcount64(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef struct OccState:
    int k
    int n
    int *host
    int *lo
    int *hi
    int *chosen
    Py_ssize_t limit
    Py_ssize_t found


cdef int _extend(OccState *st, int j, int start, uint64_t bits, list out) except -1:
    cdef int p, v, low_val, high_val
    if j == st.k:
        out.append(bits)
        st.found += 1
        if st.limit > 0 and st.found >= st.limit:
            return 1
        return 0
    low_val = st.host[st.chosen[st.lo[j]]] if st.lo[j] >= 0 else 0
    high_val = st.host[st.chosen[st.hi[j]]] if st.hi[j] >= 0 else st.n + 1
    for p in range(start, st.n - (st.k - j) + 1):
        v = st.host[p]
        if low_val < v < high_val:
            st.chosen[j] = p
            if _extend(st, j + 1, p + 1, bits | ((<uint64_t>1) << p), out):
                return 1
    return 0


def occurrence_masks(pattern, host, Py_ssize_t limit=0):
    cdef int k = len(pattern)
    cdef int n = len(host)
    cdef int hostbuf[MAXLEN]
    cdef int lobuf[MAXLEN]
    cdef int hibuf[MAXLEN]
    cdef int chosenbuf[MAXLEN]
    cdef OccState st
    cdef list out = []
    cdef int i
    if k > n:
        return out
    if n > MAXLEN:
        return _pykernels.occurrence_masks(pattern, host, limit)
    lo, hi = _pykernels._gap_indices(pattern)
    for i in range(n):
        hostbuf[i] = host[i]
    for i in range(k):
        lobuf[i] = lo[i]
        hibuf[i] = hi[i]
    st.k = k
    st.n = n
    st.host = hostbuf
    st.lo = lobuf
    st.hi = hibuf
    st.chosen = chosenbuf
    st.limit = limit
    st.found = 0
    _extend(&st, 0, 0, 0, out)
    return out


def signed_face_sum(facets, int n):
    cdef Py_ssize_t nfac = len(facets)
    cdef uint64_t size, t, rest, low, child
    cdef unsigned char *seen
    cdef uint64_t *stack
    cdef Py_ssize_t top = 0, cap, i
    cdef int64_t total = 0
    if n > BITMAP_MAX_BITS:
        return _pykernels.signed_face_sum(facets, n)
    size = (<uint64_t>1) << n
    seen = <unsigned char *> calloc((size >> 3) + 1, 1)
    cap = 1024
    stack = <uint64_t *> malloc(cap * sizeof(uint64_t))
    if seen == NULL or stack == NULL:
        free(seen)
        free(stack)
        raise MemoryError()
    try:
        for i in range(nfac):
            t = facets[i]
            if not (seen[t >> 3] >> (t & 7)) & 1:
                seen[t >> 3] |= 1 << (t & 7)
                if top == cap:
                    stack = _grow(stack, &cap)
                stack[top] = t
                top += 1
        while top > 0:
            top -= 1
            t = stack[top]
            if popcount64(t) & 1:
                total -= 1
            else:
                total += 1
            rest = t
            while rest:
                low = rest & (~rest + 1)
                rest ^= low
                child = t ^ low
                if not (seen[child >> 3] >> (child & 7)) & 1:
                    seen[child >> 3] |= 1 << (child & 7)
                    if top == cap:
                        stack = _grow(stack, &cap)
                    stack[top] = child
                    top += 1
    finally:
        free(seen)
        free(stack)
    return total


cdef uint64_t *_grow(uint64_t *stack, Py_ssize_t *cap) except NULL:
    cdef uint64_t *bigger = <uint64_t *> malloc(2 * cap[0] * sizeof(uint64_t))
    cdef Py_ssize_t i
    if bigger == NULL:
        raise MemoryError()
    for i in range(cap[0]):
        bigger[i] = stack[i]
    free(stack)
    cap[0] *= 2
    return bigger


cdef void _walk(uint64_t *zs, uint64_t *suffix, int m, int i, uint64_t cur,
                int size, int64_t *total) nogil:
    cdef int j
    cdef uint64_t nxt
    if cur & suffix[i]:
        return
    for j in range(i, m):
        nxt = cur & zs[j]
        if nxt == 0:
            if j == m - 1:
                if (size + 1) & 1:
                    total[0] -= 1
                else:
                    total[0] += 1
            continue
        _walk(zs, suffix, m, j + 1, nxt, size + 1, total)


def ez_subset_sum(zero_masks):
    cdef list zl = list(zero_masks)
    cdef int m = len(zl)
    cdef int i
    cdef int64_t total = 0
    cdef uint64_t *zs
    cdef uint64_t *suffix
    if m == 0:
        return 0
    for z in zl:
        if z >> 64:
            return _pykernels.ez_subset_sum(zl)
    zs = <uint64_t *> malloc(m * sizeof(uint64_t))
    suffix = <uint64_t *> malloc((m + 1) * sizeof(uint64_t))
    if zs == NULL or suffix == NULL:
        free(zs)
        free(suffix)
        raise MemoryError()
    try:
        for i in range(m):
            zs[i] = zl[i]
        suffix[m] = ~(<uint64_t>0)
        for i in range(m - 1, -1, -1):
            suffix[i] = suffix[i + 1] & zs[i]
        with nogil:
            _walk(zs, suffix, m, 0, ~(<uint64_t>0), 0, &total)
    finally:
        free(zs)
        free(suffix)
    return total
