# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; same contracts as _pykernels."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def fdivmod_monic(a, cnp.ndarray[double, ndim=1] m):
    cdef cnp.ndarray[double, ndim=1] r = np.array(a, dtype=np.float64)
    cdef Py_ssize_t d = m.shape[0] - 1
    cdef Py_ssize_t n = r.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double c
    if n < d:
        return np.zeros(0), r
    cdef cnp.ndarray[double, ndim=1] q = np.empty(n - d + 1)
    for i in range(n - d, -1, -1):
        c = r[i + d]
        q[i] = c
        if c != 0.0:
            for j in range(d):
                r[i + j] -= c * m[j]
    return q, r[:d].copy()


def fhorner_many(a, xs):
    cdef double[::1] c = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t m = x.shape[0]
    out_arr = np.zeros(m)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, lo, hi
    cdef double ci
    # blocks of receivers stay in cache while every coefficient sweeps them
    with nogil:
        for lo in range(0, m, 512):
            hi = lo + 512
            if hi > m:
                hi = m
            for i in range(n - 1, -1, -1):
                ci = c[i]
                for j in range(lo, hi):
                    out[j] = out[j] * x[j] + ci
    return out_arr


cdef inline double _pow_half(double d2, int half) nogil:
    cdef double out = d2
    cdef int i
    for i in range(half - 1):
        out *= d2
    return out


def sinr_scan(cnp.ndarray[double, ndim=1] sx, cnp.ndarray[double, ndim=1] sy,
              cnp.ndarray[double, ndim=1] p, cnp.ndarray[double, ndim=1] qx,
              cnp.ndarray[double, ndim=1] qy, int alpha):
    cdef Py_ssize_t n = sx.shape[0]
    cdef Py_ssize_t m = qx.shape[0]
    cdef int half = alpha // 2
    cdef cnp.ndarray[cnp.int64_t, ndim=1] best = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] top = np.zeros(m)
    cdef cnp.ndarray[double, ndim=1] second = np.zeros(m)
    cdef cnp.ndarray[double, ndim=1] interf = np.zeros(m)
    cdef Py_ssize_t i, j, b
    cdef double dx, dy, d2, s, t1, t2, acc
    with nogil:
        for j in range(m):
            b = 0
            t1 = -1.0
            t2 = 0.0
            for i in range(n):
                dx = qx[j] - sx[i]
                dy = qy[j] - sy[i]
                d2 = dx * dx + dy * dy
                if d2 == 0.0:
                    s = 1.0 / 0.0
                else:
                    s = p[i] / _pow_half(d2, half)
                if s > t1:
                    if t1 > t2:
                        t2 = t1
                    t1 = s
                    b = i
                elif s > t2:
                    t2 = s
            acc = 0.0
            for i in range(n):
                if i != b:
                    dx = qx[j] - sx[i]
                    dy = qy[j] - sy[i]
                    d2 = dx * dx + dy * dy
                    if d2 == 0.0:
                        acc += 1.0 / 0.0
                    else:
                        acc += p[i] / _pow_half(d2, half)
            best[j] = b
            top[j] = t1 if n > 0 else 0.0
            second[j] = t2
            interf[j] = acc
    return best, top, second, interf


def pair_direct(cnp.ndarray[double, ndim=1] ts, cnp.ndarray[double, ndim=1] ps,
                cnp.ndarray[double, ndim=1] tq, int alpha):
    cdef Py_ssize_t n = ts.shape[0]
    cdef Py_ssize_t m = tq.shape[0]
    cdef int half = alpha // 2
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(m)
    cdef Py_ssize_t i, j
    cdef double d, acc
    with nogil:
        for j in range(m):
            acc = 0.0
            for i in range(n):
                d = tq[j] - ts[i]
                acc += ps[i] / _pow_half(d * d, half)
            out[j] = acc
    return out
