# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same contract as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport hypot, log, fabs

from .errors import NoConvergence

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)

cdef int MAX_TERMS = 10000
cdef double SERIES_TOL = 1e-15
cdef double START_RADIUS = 4.0
cdef double COND_MAX = 100.0
cdef double SERIES_MAX_MODULUS = 60.0
cdef double STEP_MAX = 2.0
cdef double RESCALE_HI = 1e150
cdef double RESCALE_LO = 1e-150


def hyp2f1_terminating(int m, double complex b, double complex c, z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zf = np.ascontiguousarray(z, dtype=complex).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(zf.shape[0], dtype=complex)
    cdef Py_ssize_t i
    cdef int k
    cdef double complex term, total, zi
    for i in range(zf.shape[0]):
        zi = zf[i]
        term = 1.0
        total = 1.0
        for k in range(m):
            term = term * ((k - m) * (b + k) / ((c + k) * (k + 1)) * zi)
            total = total + term
        out[i] = total
    return out.reshape(np.shape(z))


cdef int _series(double complex a, double complex c, double complex z,
                 double complex *val, double complex *der, double *abs_sum) nogil:
    cdef double complex term = 1.0, total = 1.0, dtotal = 0.0
    cdef double asum = 1.0, mag, q
    cdef int n
    for n in range(MAX_TERMS):
        term = term * ((a + n) / ((c + n) * (n + 1)) * z)
        total = total + term
        dtotal = dtotal + (n + 1) * term / z
        mag = cabs(term)
        asum += mag
        q = cabs((a + n + 1) / ((c + n + 1) * (n + 2)) * z)
        if (q < 0.5 and mag * q / (1.0 - q) <= SERIES_TOL * cabs(total)) or mag == 0.0:
            val[0] = total
            der[0] = dtotal
            abs_sum[0] = asum
            return 0
    return 1


cdef int _taylor_step(double complex a, double complex c, double complex z0,
                      double complex *w, double complex *dw, double complex h) nogil:
    cdef double complex t0 = w[0], t1 = dw[0], t2
    cdef double complex hp = h
    cdef double complex val = t0 + t1 * h
    cdef double complex der = t1
    cdef int n = 0, small = 0
    while n < MAX_TERMS:
        t2 = ((n + a) * t0 - (n + 1) * (n + c - z0) * t1) / (z0 * (n + 2) * (n + 1))
        der = der + (n + 2) * t2 * hp
        hp = hp * h
        val = val + t2 * hp
        if cabs(t2 * hp) <= 1e-17 * cabs(val):
            small += 1
            if small >= 3:
                w[0] = val
                dw[0] = der
                return 0
        else:
            small = 0
        t0 = t1
        t1 = t2
        n += 1
    return 1


cdef int _hyp1f1_right(double complex a, double complex c, double complex z,
                       double complex *res) nogil:
    cdef double r = cabs(z)
    cdef double complex val, der, direction, z0, w, dw
    cdef double asum, pos, step
    if r <= SERIES_MAX_MODULUS:
        if _series(a, c, z, &val, &der, &asum):
            return 1
        if r <= START_RADIUS or asum <= COND_MAX * cabs(val):
            res[0] = val
            return 0
    direction = z / r
    z0 = direction * START_RADIUS
    if _series(a, c, z0, &w, &dw, &asum):
        return 1
    pos = START_RADIUS
    while pos < r:
        step = min(STEP_MAX, 0.5 * pos, r - pos)
        if _taylor_step(a, c, z0, &w, &dw, direction * step):
            return 1
        pos += step
        z0 = direction * pos
    res[0] = w
    return 0


def hyp1f1(double complex a, double complex c, z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zf = np.ascontiguousarray(z, dtype=complex).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(zf.shape[0], dtype=complex)
    cdef Py_ssize_t i
    cdef double complex zi, res
    cdef int fail
    for i in range(zf.shape[0]):
        zi = zf[i]
        if zi == 0:
            out[i] = 1.0
            continue
        if zi.real < 0:
            fail = _hyp1f1_right(c - a, c, -zi, &res)
            res = cexp(zi) * res
        else:
            fail = _hyp1f1_right(a, c, zi, &res)
        if fail:
            raise NoConvergence(f"1F1 evaluation exceeded {MAX_TERMS} terms at z={zi}")
        out[i] = res
    return out.reshape(np.shape(z))


def ops_recurrence(x, B, C, int n):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xf = np.ascontiguousarray(x, dtype=float).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] Bv = np.ascontiguousarray(B, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] Cv = np.ascontiguousarray(C, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((7, xf.shape[0]))
    cdef Py_ssize_t i
    cdef int m
    cdef double xi, rho, rho2, alpha, beta, big, f, log_scale
    cdef double u0, u1, u2, v0, v1, v2, w0, w1, w2
    for i in range(xf.shape[0]):
        xi = xf[i]
        rho = hypot(1.0, xi)
        rho2 = rho * rho
        u0 = 0.0
        u1 = 1.0
        v0 = 0.0
        v1 = 0.0
        w0 = 0.0
        w1 = 0.0
        log_scale = 0.0
        for m in range(n):
            alpha = (xi - Bv[m]) / rho
            beta = Cv[m] / rho2
            u2 = alpha * u1 - beta * u0
            v2 = u1 + alpha * v1 - beta * v0
            w2 = 2.0 * v1 + alpha * w1 - beta * w0
            u0 = u1
            u1 = u2
            v0 = v1
            v1 = v2
            w0 = w1
            w1 = w2
            big = fabs(u1) + fabs(u0) + fabs(v1) + fabs(v0)
            if big > RESCALE_HI or (0.0 < big < RESCALE_LO):
                f = 1.0 / big
                u0 *= f
                u1 *= f
                v0 *= f
                v1 *= f
                w0 *= f
                w1 *= f
                log_scale += log(big)
        out[0, i] = u1
        out[1, i] = u0
        out[2, i] = v1
        out[3, i] = v0
        out[4, i] = w1
        out[5, i] = w0
        out[6, i] = log_scale
    return out
