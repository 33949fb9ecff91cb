# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Semantics are defined by ``_kernels_py``."""
import numpy as np

from libc.math cimport expm1, isinf


def expm1_overlap_sum(const double[::1] r, const double[::1] log_r,
                      const double[::1] log_s, const double[:, ::1] w,
                      double beta):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t m = log_s.shape[0]
    cdef double total = 0.0
    cdef double row, t
    for i in range(n):
        row = 0.0
        for j in range(m):
            if isinf(log_s[j]):
                if beta > 0:
                    row -= w[i, j]
                continue
            t = expm1(beta * (log_s[j] - log_r[i]))
            row += w[i, j] * t
        total += r[i] * row
    return total


def log_ratio_sum(const double[::1] r, const double[::1] log_r,
                  const double[::1] log_s, const double[:, ::1] w):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t m = log_s.shape[0]
    cdef double total = 0.0
    cdef double row
    for i in range(n):
        row = 0.0
        for j in range(m):
            if isinf(log_s[j]):
                continue
            row += w[i, j] * (log_r[i] - log_s[j])
        total += r[i] * row
    return total


def pinch(const double complex[:, ::1] m, Py_ssize_t stride, Py_ssize_t d):
    cdef Py_ssize_t n = m.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t a, b, da
    for a in range(n):
        da = (a // stride) % d
        for b in range(n):
            if (b // stride) % d == da:
                o[a, b] = m[a, b]
    return out


def trace_middle(const double complex[:, ::1] m, Py_ssize_t left,
                 Py_ssize_t mid, Py_ssize_t right):
    cdef Py_ssize_t n = left * right
    out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t a, b, c, e, j
    cdef Py_ssize_t inner = mid * right
    cdef double complex acc
    for a in range(left):
        for b in range(right):
            for c in range(left):
                for e in range(right):
                    acc = 0
                    for j in range(mid):
                        acc = acc + m[a * inner + j * right + b, c * inner + j * right + e]
                    o[a * right + b, c * right + e] = acc
    return out
