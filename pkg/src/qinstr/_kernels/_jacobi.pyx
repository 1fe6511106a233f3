# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cyclic Jacobi sweeps for complex Hermitian matrices (compiled kernel)."""

from libc.math cimport sqrt

import numpy as np


cdef double _off_norm(double complex[:, ::1] a, Py_ssize_t n):
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = a[i, j]
                acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


def jacobi_sweeps(double complex[:, ::1] a, double complex[:, ::1] v,
                  int max_sweeps, double off_tol):
    """Run cyclic Jacobi sweeps in place; return True on convergence."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k, sweep
    cdef double complex apq, phase, sp, spc, tp, tq
    cdef double mag, app, aqq, tau, t, c, s

    if n < 2:
        return True
    for sweep in range(max_sweeps):
        if _off_norm(a, n) <= off_tol:
            return True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                spc = sp.conjugate()
                for k in range(n):
                    tp = a[k, p]
                    tq = a[k, q]
                    a[k, p] = c * tp - spc * tq
                    a[k, q] = sp * tp + c * tq
                for k in range(n):
                    tp = a[p, k]
                    tq = a[q, k]
                    a[p, k] = c * tp - sp * tq
                    a[q, k] = spc * tp + c * tq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    tp = v[k, p]
                    tq = v[k, q]
                    v[k, p] = c * tp - spc * tq
                    v[k, q] = sp * tp + c * tq
    return _off_norm(a, n) <= off_tol
