# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled collector.  Same algorithm as ``_pykernels.collect``."""

from libc.stdlib cimport malloc, realloc, free

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef int _push(long **stack, Py_ssize_t *cap, Py_ssize_t *top, long g, long e) except -1:
    cdef long *grown
    if top[0] + 2 > cap[0]:
        cap[0] *= 2
        grown = <long *> realloc(stack[0], cap[0] * sizeof(long))
        if grown == NULL:
            raise MemoryError()
        stack[0] = grown
    stack[0][top[0]] = g
    stack[0][top[0] + 1] = e
    top[0] += 2
    return 0


cdef int _push_word(long **stack, Py_ssize_t *cap, Py_ssize_t *top,
                    const long[:] wg, const long[:] we, long off, long ln,
                    long times) except -1:
    cdef long t, s
    for t in range(times):
        s = off + ln - 1
        while s >= off:
            _push(stack, cap, top, wg[s], we[s])
            s -= 1
    return 0


def collect_flat(const long[:] rel, const long[:] pow_off, const long[:] pow_len,
                 const long[:] conj_off, const long[:] conj_len,
                 const long[:] wg, const long[:] we,
                 exps, word, long budget):
    """Collect ``exps * word``; relation words live in the flat ``wg``/``we``."""
    cdef Py_ssize_t k = rel.shape[0]
    cdef cnp.ndarray[long, ndim=1] zarr = np.array(exps, dtype=np.int_)
    cdef long[:] z = zarr
    cdef Py_ssize_t cap = 256, top = 0
    cdef long *stack = <long *> malloc(cap * sizeof(long))
    cdef long g, e, j, steps = 0, s, q
    cdef bint has_tail
    if stack == NULL:
        raise MemoryError()
    try:
        for item in reversed(word):
            if item[1]:
                _push(&stack, &cap, &top, item[0], item[1])
        while top > 0:
            steps += 1
            if steps > budget:
                from ._pykernels import CollectionError
                raise CollectionError(f"collection exceeded {budget} steps")
            top -= 2
            g = stack[top]
            e = stack[top + 1]
            has_tail = False
            for j in range(g + 1, k):
                if z[j]:
                    has_tail = True
                    break
            if not has_tail:
                s = z[g] + e
                q = s // rel[g]
                z[g] = s - q * rel[g]
                if q:
                    _push_word(&stack, &cap, &top, wg, we, pow_off[g], pow_len[g], q)
                continue
            if e > 1:
                _push(&stack, &cap, &top, g, e - 1)
            j = k - 1
            while j > g:
                if z[j]:
                    _push_word(&stack, &cap, &top, wg, we,
                               conj_off[g * k + j], conj_len[g * k + j], z[j])
                    z[j] = 0
                j -= 1
            z[g] += 1
            if z[g] == rel[g]:
                z[g] = 0
                _push_word(&stack, &cap, &top, wg, we, pow_off[g], pow_len[g], 1)
    finally:
        free(stack)
    return [int(v) for v in zarr]
