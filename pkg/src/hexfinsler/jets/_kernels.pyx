# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled truncated-series kernels.

Same contract as ``_pykernels``: the product of two coefficient vectors is
accumulated along precomputed (ia, ib, ic) triples of the ring.
"""

import numpy as np


cdef inline void _mul_into(const double[::1] a, const double[::1] b,
                           const int[::1] ia, const int[::1] ib, const int[::1] ic,
                           double[::1] out) noexcept nogil:
    cdef Py_ssize_t t, m = ia.shape[0]
    for t in range(out.shape[0]):
        out[t] = 0.0
    for t in range(m):
        out[ic[t]] += a[ia[t]] * b[ib[t]]


def mul(const double[::1] a, const double[::1] b,
        const int[::1] ia, const int[::1] ib, const int[::1] ic, Py_ssize_t size):
    out = np.empty(size)
    cdef double[::1] o = out
    with nogil:
        _mul_into(a, b, ia, ib, ic, o)
    return out


def horner(const double[::1] coef, const double[::1] h,
           const int[::1] ia, const int[::1] ib, const int[::1] ic, Py_ssize_t size):
    """sum_k coef[k] * h**k for a series h with zero constant term."""
    cdef Py_ssize_t k, t, deg = coef.shape[0] - 1
    acc_arr = np.zeros(size)
    tmp_arr = np.empty(size)
    cdef double[::1] acc = acc_arr
    cdef double[::1] tmp = tmp_arr
    with nogil:
        acc[0] = coef[deg]
        k = deg - 1
        while k >= 0:
            _mul_into(acc, h, ia, ib, ic, tmp)
            for t in range(size):
                acc[t] = tmp[t]
            acc[0] += coef[k]
            k -= 1
    return acc_arr
