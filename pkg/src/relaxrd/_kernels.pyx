# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled reconstruction kernels; mirrors ``_kernels_py`` operation for operation."""
import numpy as np
from libc.math cimport fabs
from libc.stdlib cimport abs as iabs

NAME = "cython"


def eno_left(q, int r, Py_ssize_t j0, Py_ssize_t j1, double atol, coef, double bias=1.0):
    cdef double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef double[:, ::1] cv = np.ascontiguousarray(coef.reshape(r, r), dtype=np.float64)
    cdef Py_ssize_t nl = qv.shape[0], n = qv.shape[1]
    out_arr = np.zeros((nl, j1 - j0))
    cdef double[:, ::1] out = out_arr
    # diff[lev, i]: undivided difference of order lev over cells i..i+lev
    diff_arr = np.zeros((r, n))
    cdef double[:, ::1] diff = diff_arr
    cdef Py_ssize_t line, i, j, s, k
    cdef int lev, shift
    cdef double a, b, aa, bb, acc
    cdef bint go_left, pref_left
    for line in range(nl):
        for i in range(n):
            diff[0, i] = qv[line, i]
        for lev in range(1, r):
            for i in range(n - lev):
                diff[lev, i] = diff[lev - 1, i + 1] - diff[lev - 1, i]
        for j in range(j0, j1):
            s = j
            for lev in range(1, r):
                a = diff[lev, s - 1]
                b = diff[lev, s]
                aa = fabs(a)
                bb = fabs(b)
                pref_left = iabs(2 * <int>(j - s) + 2 - lev) <= iabs(2 * <int>(j - s) - lev)
                if pref_left:
                    go_left = not (aa > bias * bb + atol)
                else:
                    go_left = bb > bias * aa + atol
                if go_left:
                    s -= 1
            shift = <int>(j - s)
            acc = 0.0
            for k in range(r):
                acc = acc + cv[shift, k] * qv[line, s + k]
            out[line, j - j0] = acc
    return out_arr


def weno5_left(q, Py_ssize_t j0, Py_ssize_t j1, double eps):
    cdef double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t nl = qv.shape[0]
    out_arr = np.zeros((nl, j1 - j0))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t line, j
    cdef double qmm, qm, q0, qp, qpp, p0, p1, p2, b0, b1, b2, a0, a1, a2, t
    for line in range(nl):
        for j in range(j0, j1):
            qmm = qv[line, j - 2]
            qm = qv[line, j - 1]
            q0 = qv[line, j]
            qp = qv[line, j + 1]
            qpp = qv[line, j + 2]
            p0 = (2.0 * qmm - 7.0 * qm + 11.0 * q0) / 6.0
            p1 = (-qm + 5.0 * q0 + 2.0 * qp) / 6.0
            p2 = (2.0 * q0 + 5.0 * qp - qpp) / 6.0
            t = qmm - 4.0 * qm + 3.0 * q0
            b0 = 13.0 / 12.0 * (qmm - 2.0 * qm + q0) * (qmm - 2.0 * qm + q0) + 0.25 * t * t
            t = qm - qp
            b1 = 13.0 / 12.0 * (qm - 2.0 * q0 + qp) * (qm - 2.0 * q0 + qp) + 0.25 * t * t
            t = 3.0 * q0 - 4.0 * qp + qpp
            b2 = 13.0 / 12.0 * (q0 - 2.0 * qp + qpp) * (q0 - 2.0 * qp + qpp) + 0.25 * t * t
            a0 = 0.1 / ((eps + b0) * (eps + b0))
            a1 = 0.6 / ((eps + b1) * (eps + b1))
            a2 = 0.3 / ((eps + b2) * (eps + b2))
            out[line, j - j0] = (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2)
    return out_arr
