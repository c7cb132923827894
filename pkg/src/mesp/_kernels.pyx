# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: FPTAS stage transition and Monte Carlo minima.

See ``_kernels_py.py`` for the reference semantics; both must agree exactly.
"""
import numpy as np

from libc.stdint cimport int64_t, uint64_t


def advance_stage(keys, options, counts, int64_t base, int64_t T, int64_t max_count):
    cdef int64_t[::1] kv = np.ascontiguousarray(keys, dtype=np.int64)
    cdef int64_t[:, ::1] ov = np.ascontiguousarray(options, dtype=np.int64)
    cdef int64_t[::1] cv = np.ascontiguousarray(counts, dtype=np.int64)
    cdef Py_ssize_t nkeys = kv.shape[0], nopt = ov.shape[0], ndims = ov.shape[1]
    cdef int64_t sat = T + 1, stride = 1, rest, cnt, new, mul, s
    cdef Py_ssize_t p, o, j
    cdef int64_t comps[64]
    if ndims > 64:
        raise ValueError("at most 64 log components")
    for j in range(ndims):
        stride *= base
    cand_arr = np.empty(nkeys * nopt, dtype=np.int64)
    cdef int64_t[::1] cand = cand_arr
    for p in range(nkeys):
        rest = kv[p]
        for j in range(ndims):
            comps[j] = rest % base
            rest //= base
        for o in range(nopt):
            cnt = rest + cv[o]
            if max_count >= 0 and cnt > max_count:
                cand[p * nopt + o] = -1
                continue
            new = cnt * stride
            mul = 1
            for j in range(ndims):
                s = comps[j] + ov[o, j]
                if s > sat:
                    s = sat
                new += s * mul
                mul *= base
            cand[p * nopt + o] = new
    flat = np.flatnonzero(cand_arr >= 0)
    out, first = np.unique(cand_arr[flat], return_index=True)
    src = flat[first]
    return out, src // nopt, src % nopt


def min_index_counts(raw, thresholds, int d):
    cdef uint64_t[:, ::1] rv = np.ascontiguousarray(raw, dtype=np.uint64)
    cdef int64_t[:, ::1] th = np.ascontiguousarray(thresholds, dtype=np.int64)
    cdef Py_ssize_t ntrials = rv.shape[0], nvars = rv.shape[1], t, v
    cdef int top = d - 1, m, j
    cdef int64_t u
    counts_arr = np.zeros(d, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    for t in range(ntrials):
        m = top
        for v in range(nvars):
            u = <int64_t>(rv[t, v] >> 11)
            j = 0
            while j < m and u < th[v, j]:
                j += 1
            if j < m:
                m = j
                if m == 0:
                    break
        counts[m] += 1
    return [int(c) for c in counts_arr]
