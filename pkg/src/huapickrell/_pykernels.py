"""Pure-Python implementations of the hot numerical kernels.

These mirror ``_ckernels.pyx`` line for line and are used when the compiled
extension is unavailable (or when ``HUAPICKRELL_BACKEND=python``).  Inputs are
already validated by the public wrappers in :mod:`huapickrell.specialfns` and
:mod:`huapickrell.pseudo_jacobi`.
"""
import cmath
import math

import numpy as np

from .errors import NoConvergence

MAX_TERMS = 10000
SERIES_TOL = 1e-15
# Radius on which the Kummer series is always trusted; beyond it, a series
# whose absolute term sum exceeds COND_MAX times the result is replaced by
# Taylor continuation of Kummer's equation along the ray.
START_RADIUS = 4.0
COND_MAX = 100.0
SERIES_MAX_MODULUS = 60.0
STEP_MAX = 2.0
RESCALE_HI = 1e150
RESCALE_LO = 1e-150


def hyp2f1_terminating(m, b, c, z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    flat_z = z.ravel()
    flat_out = out.ravel()
    for i in range(flat_z.size):
        zi = flat_z[i]
        term = 1.0 + 0.0j
        total = 1.0 + 0.0j
        for k in range(m):
            term *= (k - m) * (b + k) / ((c + k) * (k + 1)) * zi
            total += term
        flat_out[i] = total
    return out


def _series(a, c, z):
    """Kummer series with derivative; returns (value, derivative, abs-sum)."""
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    dtotal = 0.0j
    abs_sum = 1.0
    for n in range(MAX_TERMS):
        ratio = (a + n) / ((c + n) * (n + 1))
        term *= ratio * z
        total += term
        dtotal += (n + 1) * term / z
        mag = abs(term)
        abs_sum += mag
        # tail bound once consecutive-term ratio is below 1/2
        q = abs((a + n + 1) / ((c + n + 1) * (n + 2)) * z)
        if q < 0.5 and mag * q / (1.0 - q) <= SERIES_TOL * abs(total):
            return total, dtotal, abs_sum
        if mag == 0.0:
            return total, dtotal, abs_sum
    raise NoConvergence(f"1F1 series exceeded {MAX_TERMS} terms at z={z}")


def _taylor_step(a, c, z0, w, dw, h):
    """Advance (w, w') of Kummer's equation from z0 to z0 + h by re-expansion."""
    t0, t1 = w, dw
    hp = h
    val = t0 + t1 * h
    der = t1
    n = 0
    small = 0
    while n < MAX_TERMS:
        t2 = ((n + a) * t0 - (n + 1) * (n + c - z0) * t1) / (z0 * (n + 2) * (n + 1))
        der += (n + 2) * t2 * hp
        hp *= h
        term = t2 * hp
        val += term
        if abs(term) <= 1e-17 * abs(val):
            small += 1
            if small >= 3:
                return val, der
        else:
            small = 0
        t0, t1 = t1, t2
        n += 1
    raise NoConvergence("Taylor re-expansion of Kummer's equation did not converge")


def _hyp1f1_right(a, c, z):
    r = abs(z)
    if r <= SERIES_MAX_MODULUS:
        val, _, abs_sum = _series(a, c, z)
        if r <= START_RADIUS or abs_sum <= COND_MAX * abs(val):
            return val
    direction = z / r
    z0 = direction * START_RADIUS
    w, dw, _ = _series(a, c, z0)
    pos = START_RADIUS
    while pos < r:
        step = min(STEP_MAX, 0.5 * pos, r - pos)
        w, dw = _taylor_step(a, c, z0, w, dw, direction * step)
        pos += step
        z0 = direction * pos
    return w


def hyp1f1(a, c, z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    flat_z = z.ravel()
    flat_out = out.ravel()
    a = complex(a)
    c = complex(c)
    for i in range(flat_z.size):
        zi = complex(flat_z[i])
        if zi == 0:
            flat_out[i] = 1.0
        elif zi.real < 0:
            flat_out[i] = cmath.exp(zi) * _hyp1f1_right(c - a, c, -zi)
        else:
            flat_out[i] = _hyp1f1_right(a, c, zi)
    return out


def ops_recurrence(x, B, C, n):
    """Scaled three-term recurrence for monic orthogonal polynomials.

    Returns an array of shape (7, len(x)) holding
    ``u_n, u_{n-1}, v_n, v_{n-1}, w_n, w_{n-1}, log_scale`` where
    ``u_m = p_m / rho^m``, ``v_m = p_m' / rho^(m-1)``, ``w_m = p_m'' / rho^(m-2)``,
    ``rho = sqrt(1 + x^2)``, all multiplied by ``exp(-log_scale)``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((7, x.size))
    for i in range(x.size):
        xi = float(x[i])
        rho = math.hypot(1.0, xi)
        rho2 = rho * rho
        u0, u1 = 0.0, 1.0
        v0, v1 = 0.0, 0.0
        w0, w1 = 0.0, 0.0
        log_scale = 0.0
        for m in range(n):
            alpha = (xi - B[m]) / rho
            beta = C[m] / rho2
            u2 = alpha * u1 - beta * u0
            v2 = u1 + alpha * v1 - beta * v0
            w2 = 2.0 * v1 + alpha * w1 - beta * w0
            u0, u1 = u1, u2
            v0, v1 = v1, v2
            w0, w1 = w1, w2
            big = abs(u1) + abs(u0) + abs(v1) + abs(v0)
            if big > RESCALE_HI or (0.0 < big < RESCALE_LO):
                f = 1.0 / big
                u0 *= f
                u1 *= f
                v0 *= f
                v1 *= f
                w0 *= f
                w1 *= f
                log_scale += math.log(big)
        out[:, i] = (u1, u0, v1, v0, w1, w0, log_scale)
    return out
