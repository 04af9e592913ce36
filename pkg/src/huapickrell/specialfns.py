"""Special functions: terminating Gauss 2F1, Kummer 1F1, complex log-Gamma, Bessel J.

Scalar entry points accept Python or numpy numbers; the ``*_array`` variants
take numpy arrays of arguments and call straight into the selected kernel
backend.
"""
import cmath
import math

import numpy as np

from . import _backend
from .errors import DomainError, PolePassed

_LANCZOS_G = 671.0 / 128.0
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_LOG_SQRT_2PI = math.log(2.5066282746310005)


def _is_nonpositive_integer(c, tol):
    c = complex(c)
    return abs(c.imag) <= tol and c.real < 0.5 and abs(c.real - round(c.real)) <= tol


def gauss_2f1_terminating(m, b, c, z):
    """2F1(-m, b; c; z) as the exact (m+1)-term sum."""
    return complex(gauss_2f1_terminating_array(m, b, c, np.array([z], dtype=complex))[0])


def gauss_2f1_terminating_array(m, b, c, z):
    m = int(m)
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    c = complex(c)
    for k in range(m):
        if abs(c + k) <= 1e-14:
            raise PolePassed(f"2F1 denominator c+{k} vanishes (c={c})")
    return _backend.hyp2f1_terminating(m, complex(b), c, np.asarray(z, dtype=complex))


def kummer_1f1(a, c, z):
    """Confluent hypergeometric 1F1(a; c; z)."""
    return complex(kummer_1f1_array(a, c, np.array([z], dtype=complex))[0])


def kummer_1f1_array(a, c, z):
    if _is_nonpositive_integer(c, 1e-12):
        raise PolePassed(f"1F1 lower parameter c={c} is a nonpositive integer")
    return _backend.hyp1f1(complex(a), complex(c), np.asarray(z, dtype=complex))


def _lanczos(z):
    # valid for Re z >= 0.5
    ser = _LANCZOS_C0
    for k, coef in enumerate(_LANCZOS_COEF, start=1):
        ser += coef / (z + k)
    t = z + _LANCZOS_G
    return _LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(ser) - cmath.log(z)


def log_gamma_complex(z):
    """Principal branch of log Gamma(z), cut along the nonpositive real axis."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"log_gamma argument must be finite, got {z}")
    if _is_nonpositive_integer(z, 1e-12):
        raise PolePassed(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return _lanczos(z)
    # shift right; the sum of principal logs keeps the analytic branch
    n = int(math.ceil(0.5 - z.real))
    shift = 0j
    for k in range(n):
        shift += cmath.log(z + k)
    return _lanczos(z + n) - shift


def gamma_ratio(num, den):
    """exp(sum log Gamma(num) - sum log Gamma(den)) as a complex number."""
    total = sum(log_gamma_complex(v) for v in num) - sum(log_gamma_complex(v) for v in den)
    return cmath.exp(total)


def log_gamma_ratio(num, den):
    return sum(log_gamma_complex(v) for v in num) - sum(log_gamma_complex(v) for v in den)


def _miller_start(order, x):
    big = max(order, x)
    return int(big + 30 + 12 * math.sqrt(big)) + 2


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for real nu, x > 0."""
    nu = float(nu)
    x = float(x)
    if not x > 0:
        raise DomainError(f"bessel_j needs x > 0, got {x}")
    if abs(nu) > 50:
        raise DomainError(f"bessel_j supports |nu| <= 50, got {nu}")
    n = math.floor(nu)
    nu0 = nu - n
    if nu0 == 0.0 and n < 0:
        return (-1.0) ** n * bessel_j(-nu, x)
    top = max(n, 1)
    M = _miller_start(top, x)
    # backward recurrence J_{k-1} = 2(nu0+k)/x J_k - J_{k+1} on orders nu0+k
    vals = np.zeros(M + 2)
    vals[M] = 1e-300
    for k in range(M, 0, -1):
        vals[k - 1] = 2.0 * (nu0 + k) / x * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals[k - 1:] *= 1e-250
    # normalise with (x/2)^nu0 = sum_k coef_k J_{nu0+2k}
    norm = 0.0
    for k in range(0, M + 1, 2):
        j = k // 2
        if j == 0:
            coef = math.gamma(nu0 + 1.0)
        else:
            coef = (nu0 + 2 * j) * math.exp(math.lgamma(nu0 + j) - math.lgamma(j + 1.0))
        norm += coef * vals[k]
    scale = math.exp(nu0 * math.log(x / 2.0)) / norm
    if n >= 0:
        return float(vals[n] * scale)
    # negative orders: continue downward from J_{nu0}, J_{nu0+1}
    jk, jk1 = vals[0] * scale, vals[1] * scale
    for k in range(0, n, -1):
        jk, jk1 = 2.0 * (nu0 + k) / x * jk - jk1, jk
    return float(jk)
