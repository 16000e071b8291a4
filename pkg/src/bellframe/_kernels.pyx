# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels.

Same contracts as ``_kernels_py``.  Histories are limited to 64 (one machine
word per event) and weights must satisfy ``sum(weights) < 2**31`` so that
products of two restricted weights fit in a signed 64-bit integer; the
dispatcher in ``kernels.py`` routes everything else to the Python versions.
"""

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    MAXBITS = 64


cdef inline int64_t _weight(const int64_t* w, uint64_t m) nogil:
    cdef int64_t total = 0
    while m:
        total += w[__builtin_ctzll(m)]
        m &= m - 1
    return total


cdef int _load(weights, int64_t* out) except -1:
    cdef Py_ssize_t n = len(weights)
    cdef Py_ssize_t i
    if n > MAXBITS:
        raise ValueError("compiled kernels handle at most 64 histories")
    for i in range(n):
        out[i] = weights[i]
    return 0


def mask_weight(weights, mask):
    cdef int64_t w[MAXBITS]
    _load(weights, w)
    return _weight(w, <uint64_t>mask)


def refine(int nbits, masks):
    cdef Py_ssize_t nm = len(masks)
    cdef Py_ssize_t j
    cdef int i
    cdef uint64_t key
    cdef uint64_t ms[MAXBITS]
    cdef dict blocks = {}
    if nbits > MAXBITS or nm > MAXBITS:
        raise ValueError("compiled refine handles at most 64 histories and 64 masks")
    for j in range(nm):
        ms[j] = masks[j]
    for i in range(nbits):
        key = 0
        for j in range(nm):
            if (ms[j] >> i) & 1:
                key |= (<uint64_t>1) << j
        blocks[key] = blocks.get(key, 0) | ((<uint64_t>1) << i)
    return tuple(blocks.values())


def screen(weights, conds, lefts, rights):
    cdef int64_t w[MAXBITS]
    cdef uint64_t lm[MAXBITS]
    cdef uint64_t rm[MAXBITS]
    cdef int64_t lw[MAXBITS]
    cdef int64_t rw[MAXBITS]
    cdef Py_ssize_t nl = len(lefts)
    cdef Py_ssize_t nr = len(rights)
    cdef Py_ssize_t ci, li, ri
    cdef uint64_t c, lc
    cdef int64_t wc, joint
    cdef int nulls = 0
    cdef list violations = []
    _load(weights, w)
    if nl > MAXBITS or nr > MAXBITS:
        raise ValueError("compiled screen handles at most 64 atoms per side")
    for li in range(nl):
        lm[li] = lefts[li]
    for ri in range(nr):
        rm[ri] = rights[ri]
    for ci in range(len(conds)):
        c = conds[ci]
        wc = _weight(w, c)
        if wc == 0:
            nulls += 1
            continue
        for li in range(nl):
            lw[li] = _weight(w, lm[li] & c)
        for ri in range(nr):
            rw[ri] = _weight(w, rm[ri] & c)
        for li in range(nl):
            lc = lm[li] & c
            for ri in range(nr):
                joint = _weight(w, lc & rm[ri])
                if joint * wc != lw[li] * rw[ri]:
                    violations.append((ci, li, ri, joint, lw[li], rw[ri], wc))
    return violations, nulls
