# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: cyclic complex Jacobi and pivoted LU inversion.

Same algorithm and operation order as ``_pykernels``.
"""
import numpy as np

from libc.math cimport sqrt, fabs

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double complex conj(double complex)

cdef int MAX_SWEEPS = 60


def jacobi_eigh(H, double offdiag_tol):
    cdef double complex[:, ::1] a = np.array(H, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, p, q
    cdef double complex tmp
    for i in range(n):
        for j in range(i, n):
            tmp = 0.5 * (a[i, j] + conj(a[j, i]))
            a[i, j] = tmp
            a[j, i] = conj(tmp)
    vv = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = vv
    cdef int sweeps = 0
    cdef int sw
    cdef bint rotated
    cdef double off, mag, app, aqq, theta, t, c, s
    cdef double complex b, ph, phc, xp, xq
    with nogil:
        for sw in range(1, MAX_SWEEPS + 1):
            sweeps = sw
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    mag = cabs(a[p, q])
                    off += 2.0 * mag * mag
            if sqrt(off) <= offdiag_tol:
                sweeps = sw - 1
                break
            rotated = False
            for p in range(n - 1):
                for q in range(p + 1, n):
                    b = a[p, q]
                    mag = cabs(b)
                    if mag == 0.0:
                        continue
                    app = creal(a[p, p])
                    aqq = creal(a[q, q])
                    if mag <= 1e-300:
                        continue
                    ph = b / mag
                    theta = (aqq - app) / (2.0 * mag)
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    phc = conj(ph)
                    for i in range(n):
                        xp = a[i, p]
                        xq = a[i, q]
                        a[i, p] = c * xp - s * phc * xq
                        a[i, q] = s * xp + c * phc * xq
                    for j in range(n):
                        xp = a[p, j]
                        xq = a[q, j]
                        a[p, j] = c * xp - s * ph * xq
                        a[q, j] = s * xp + c * ph * xq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = app - t * mag
                    a[q, q] = aqq + t * mag
                    for i in range(n):
                        xp = v[i, p]
                        xq = v[i, q]
                        v[i, p] = c * xp - s * phc * xq
                        v[i, q] = s * xp + c * phc * xq
                    rotated = True
            if not rotated:
                break
    w = np.empty(n, dtype=np.float64)
    for i in range(n):
        w[i] = creal(a[i, i])
    return w, vv, sweeps


def lu_inverse(M, double pivot_tol):
    cdef double complex[:, ::1] a = np.array(M, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    out = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] inv = out
    cdef Py_ssize_t i, j, k, piv
    cdef double best, mag
    cdef double complex d, f, tmp
    cdef bint singular = False
    with nogil:
        for k in range(n):
            piv = k
            best = cabs(a[k, k])
            for i in range(k + 1, n):
                mag = cabs(a[i, k])
                if mag > best:
                    best = mag
                    piv = i
            if best < pivot_tol:
                singular = True
                break
            if piv != k:
                for j in range(n):
                    tmp = a[k, j]
                    a[k, j] = a[piv, j]
                    a[piv, j] = tmp
                    tmp = inv[k, j]
                    inv[k, j] = inv[piv, j]
                    inv[piv, j] = tmp
            d = a[k, k]
            for j in range(n):
                a[k, j] = a[k, j] / d
                inv[k, j] = inv[k, j] / d
            for i in range(n):
                if i != k:
                    f = a[i, k]
                    if f != 0.0:
                        for j in range(n):
                            a[i, j] = a[i, j] - f * a[k, j]
                            inv[i, j] = inv[i, j] - f * inv[k, j]
    if singular:
        return None
    return out
