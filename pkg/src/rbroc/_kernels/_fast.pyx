# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels.

Mirrors _ref.py operation by operation: identical arithmetic expressions,
identical left-to-right accumulation, so results are bit-identical to the
reference backend. Atom arrays must be row-sorted ascending, float64,
C-contiguous (the dispatch layer guarantees this).
"""

import numpy as np

from libc.math cimport INFINITY, NAN

MODE_ERROR = 0
MODE_WEIGHTED = 1
MODE_FNDR = 2


def discrete_auc_batch(double[:, ::1] p_nd, double[:, ::1] p_d):
    cdef Py_ssize_t n = p_nd.shape[0], m = p_nd.shape[1], r, j
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double fd, acc
    with nogil:
        for r in range(n):
            fd = 0.0
            acc = 0.0
            for j in range(m):
                fd = fd + p_d[r, j]
                acc = acc + p_nd[r, j] * (1.0 - fd)
            out[r] = acc
    return out_arr


def discrete_copt_batch(double[:, ::1] p_nd, double[:, ::1] p_d, double[::1] w):
    cdef Py_ssize_t n = p_nd.shape[0], m = p_nd.shape[1], r, j, bi
    out_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef double fd, fnd, err, best, wr
    with nogil:
        for r in range(n):
            fd = 0.0
            fnd = 0.0
            best = INFINITY
            bi = 0
            wr = w[r]
            for j in range(m):
                fd = fd + p_d[r, j]
                fnd = fnd + p_nd[r, j]
                err = wr * fd + (1.0 - wr) * (1.0 - fnd)
                if err < best:
                    best = err
                    bi = j
            if wr < best:
                bi = m
            out[r] = bi
    return out_arr


def process_auc_batch(double[:, ::1] w_nd, double[:, ::1] a_nd,
                      double[:, ::1] w_d, double[:, ::1] a_d):
    cdef Py_ssize_t n = w_nd.shape[0], k1 = w_nd.shape[1], k2 = w_d.shape[1], r, i, j
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double fd, acc, v
    with nogil:
        for r in range(n):
            fd = 0.0
            acc = 0.0
            j = 0
            for i in range(k1):
                v = a_nd[r, i]
                while j < k2 and a_d[r, j] <= v:
                    fd = fd + w_d[r, j]
                    j += 1
                acc = acc + w_nd[r, i] * (1.0 - fd)
            out[r] = acc
    return out_arr


def step_copt_batch(double[:, ::1] w_nd, double[:, ::1] a_nd,
                    double[:, ::1] w_d, double[:, ::1] a_d,
                    double[::1] w, int mode):
    cdef Py_ssize_t n = w_nd.shape[0], k1 = w_nd.shape[1], k2 = w_d.shape[1], r, i, j
    cut_arr = np.empty(n, dtype=np.float64)
    fnr_arr = np.empty(n, dtype=np.float64)
    fpr_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] cut = cut_arr
    cdef double[::1] fnr = fnr_arr
    cdef double[::1] fpr = fpr_arr
    cdef double fnd, fd, wr, v, val, num, den
    cdef double best_v, best_c, best_fnd, best_fd
    cdef bint defined
    with nogil:
        for r in range(n):
            i = 0
            j = 0
            fnd = 0.0
            fd = 0.0
            wr = w[r]
            best_v = INFINITY
            best_c = NAN
            best_fnd = 0.0
            best_fd = 0.0
            while i < k1 or j < k2:
                if i < k1 and (j >= k2 or a_nd[r, i] <= a_d[r, j]):
                    v = a_nd[r, i]
                else:
                    v = a_d[r, j]
                while i < k1 and a_nd[r, i] <= v:
                    fnd = fnd + w_nd[r, i]
                    i += 1
                while j < k2 and a_d[r, j] <= v:
                    fd = fd + w_d[r, j]
                    j += 1
                defined = True
                if mode == 2:
                    num = wr * fd
                    den = num + (1.0 - wr) * fnd
                    if den > 0.0:
                        val = num / den
                    else:
                        defined = False
                        val = INFINITY
                else:
                    val = wr * fd + (1.0 - wr) * (1.0 - fnd)
                if defined:
                    if mode == 0:
                        if val < best_v:
                            best_v = val
                            best_c = v
                            best_fnd = fnd
                            best_fd = fd
                    else:
                        if val <= best_v:
                            best_v = val
                            best_c = v
                            best_fnd = fnd
                            best_fd = fd
            if mode == 0:
                if wr < best_v:
                    best_v = wr
                    best_c = INFINITY
                    best_fd = 1.0
                    best_fnd = 1.0
                if (1.0 - wr) < best_v:
                    best_c = -INFINITY
                    best_fd = 0.0
                    best_fnd = 0.0
            cut[r] = best_c
            fnr[r] = best_fd
            fpr[r] = 1.0 - best_fnd
    return cut_arr, fnr_arr, fpr_arr


def cdf_at_batch(double[:, ::1] w_sorted, double[:, ::1] a_sorted, double[::1] c):
    cdef Py_ssize_t n = w_sorted.shape[0], k = w_sorted.shape[1], r, j
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double f, cr
    with nogil:
        for r in range(n):
            f = 0.0
            cr = c[r]
            for j in range(k):
                if a_sorted[r, j] <= cr:
                    f = f + w_sorted[r, j]
                else:
                    break
            out[r] = f
    return out_arr
