# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Signatures and results match ``_pykernels``."""
import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t


def trace_hist(const int32_t[:, ::1] trmul, const int32_t[:, ::1] freqs,
               const int32_t[:, ::1] pts, int p):
    cdef Py_ssize_t nm = freqs.shape[0], k = freqs.shape[1], n = pts.shape[0]
    cdef Py_ssize_t i, j, x
    cdef int acc
    out = np.zeros((nm, p), dtype=np.int64)
    cdef int64_t[:, ::1] o = out
    with nogil:
        for i in range(nm):
            for x in range(n):
                acc = 0
                for j in range(k):
                    acc = acc + trmul[freqs[i, j], pts[x, j]]
                o[i, acc % p] += 1
    return out


def pair_form_hist(const int32_t[:, ::1] X, const int32_t[:, ::1] Y,
                   const int32_t[:, ::1] sub, const int32_t[:, ::1] sqsign,
                   const int32_t[:, ::1] add):
    cdef Py_ssize_t n = X.shape[0], m = Y.shape[0], k = Y.shape[1]
    cdef Py_ssize_t a, b, j
    cdef int32_t acc
    out = np.zeros(sub.shape[0], dtype=np.int64)
    cdef int64_t[::1] o = out
    with nogil:
        for a in range(n):
            for b in range(m):
                acc = 0
                for j in range(k):
                    acc = add[acc, sqsign[j, sub[X[a, j], Y[b, j]]]]
                o[acc] += 1
    return out


def pair_form_match(const int32_t[:, ::1] X, const int32_t[:, ::1] Y,
                    const int32_t[::1] target, const int32_t[:, ::1] sub,
                    const int32_t[:, ::1] sqsign, const int32_t[:, ::1] add):
    cdef Py_ssize_t n = X.shape[0], m = Y.shape[0], k = Y.shape[1]
    cdef Py_ssize_t a, b, j
    cdef int32_t acc
    cdef int64_t total = 0
    with nogil:
        for a in range(n):
            for b in range(m):
                acc = 0
                for j in range(k):
                    acc = add[acc, sqsign[j, sub[X[a, j], Y[b, j]]]]
                if acc == target[b]:
                    total += 1
    return total


def shift_member_count(const int32_t[:, ::1] W, const int32_t[:, ::1] E,
                       const int32_t[:, ::1] sub, const uint8_t[::1] mask, int q):
    cdef Py_ssize_t n = W.shape[0], m = E.shape[0], k = W.shape[1]
    cdef Py_ssize_t a, b, j
    cdef int64_t idx, total = 0
    with nogil:
        for a in range(n):
            for b in range(m):
                idx = 0
                for j in range(k):
                    idx = idx * q + sub[W[a, j], E[b, j]]
                total += mask[idx]
    return total
