# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel assembly: fused loops, explicit real arithmetic.

Mirrors ``_kernels_py`` exactly; the backend selector picks whichever is
available at import time. The inner fill avoids libc complex division (one
real divide per entry instead) and the N^2 temporaries of the broadcast path.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx

cdef double PI = 3.141592653589793238462643383279502884


def fill_single(double[::1] points, double[::1] weights, cplx[::1] s_nodes,
                double g1, double ob1, double c1,
                double g2, double ob2, double c2,
                double alpha, double omega1, double omega2,
                cplx[:, :, ::1] out_k, cplx[:, ::1] out_a, cplx[:, ::1] out_d):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t m = s_nodes.shape[0]
    cdef Py_ssize_t i, l, mu
    cdef cplx s, a, ci
    cdef double s_re, s_im, ar, ai, anorm, inv_ar, inv_ai
    cdef double dre, dim, den, tre, tim, kre, kim
    cdef double amp1, amp2, half1, half2, dmu
    cdef double[::1] wr1 = np.empty(n)
    cdef double[::1] w2s_re = np.empty(n)
    cdef double[::1] w2s_im = np.empty(n)
    cdef double[::1] wr2 = np.empty(n)
    cdef double[::1] shifted = np.empty(n)

    amp1 = g1 * ob1 * ob1 / (2.0 * PI)
    amp2 = g2 * ob2 * ob2 / (2.0 * PI)
    half1 = 0.5 * g1
    half2 = 0.5 * g2
    for mu in range(n):
        dmu = points[mu] - c1
        wr1[mu] = alpha * weights[mu] * amp1 / (dmu * dmu + half1 * half1)
        dmu = points[mu] - c2
        wr2[mu] = weights[mu] * amp2 / (dmu * dmu + half2 * half2)
        shifted[mu] = points[mu] - omega1 - omega2

    for i in range(m):
        s = s_nodes[i]
        s_re = s.real
        s_im = s.imag
        ci = -1j / s
        den = s_re * s_re + s_im * s_im
        for mu in range(n):
            # wr2[mu] / s, hoisted out of the row loop
            w2s_re[mu] = wr2[mu] * s_re / den
            w2s_im[mu] = -wr2[mu] * s_im / den
        for l in range(n):
            a = s + 1j * (points[l] - omega2) \
                + ob1 * ob1 / (s + half1 + 1j * (points[l] + c1 - omega1 - omega2))
            out_a[i, l] = a
            out_d[i, l] = ci / a
            ar = a.real
            ai = a.imag
            anorm = ar * ar + ai * ai
            inv_ar = ar / anorm
            inv_ai = -ai / anorm
            for mu in range(n):
                # wr1[mu] / (s + i (points[l] + shifted[mu])) + wr2[mu] / s
                dre = s_re
                dim = s_im + points[l] + shifted[mu]
                den = dre * dre + dim * dim
                tre = wr1[mu] * dre / den + w2s_re[mu]
                tim = -wr1[mu] * dim / den + w2s_im[mu]
                kre = tre * inv_ar - tim * inv_ai
                kim = tre * inv_ai + tim * inv_ar
                out_k[i, l, mu] = kre + 1j * kim


def fill_two(double[::1] points, double[::1] weights, cplx[::1] s_nodes,
             double g1, double ob1, double c1,
             double g2, double ob2, double c2,
             double omega1, double omega2,
             cplx[:, :, ::1] out_k, cplx[:, ::1] out_a, cplx[:, ::1] out_d):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t m = s_nodes.shape[0]
    cdef Py_ssize_t i, l, mu
    cdef cplx s, a, ci, inv_as
    cdef double amp2, half1, half2, dmu, br, bi
    cdef double[::1] wr2 = np.empty(n)

    amp2 = g2 * ob2 * ob2 / (2.0 * PI)
    half1 = 0.5 * g1
    half2 = 0.5 * g2
    for mu in range(n):
        dmu = points[mu] - c2
        wr2[mu] = weights[mu] * amp2 / (dmu * dmu + half2 * half2)

    for i in range(m):
        s = s_nodes[i]
        ci = -1j / s
        for l in range(n):
            a = s + 1j * (points[l] - omega2) \
                + ob1 * ob1 / (s + half1 + 1j * (points[l] + c1 - omega1 - omega2))
            out_a[i, l] = a
            out_d[i, l] = ci / a
            inv_as = 1.0 / (a * s)
            br = inv_as.real
            bi = inv_as.imag
            for mu in range(n):
                out_k[i, l, mu] = (wr2[mu] * br) + 1j * (wr2[mu] * bi)
