"""Finite-N pseudo-Jacobi ensemble on the real line.

The weight is ``phi(x) = (1+x^2)^(-Re s - N) exp(2 Im s arctan x)``.  Its monic
orthogonal polynomials are evaluated through a three-term recurrence whose
coefficients are known in closed form.  The recurrence runs on values scaled by
``rho^m`` with ``rho = sqrt(1+x^2)`` so that products with ``sqrt(phi)`` stay in
range up to N = 500.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _backend
from .errors import DomainError, ImaginaryLeak, NegativeDeterminant, NotDefined, Underflow
from .specialfns import gauss_2f1_terminating_array, log_gamma_complex

N_MAX = 500
CONFLUENT_REL = 1e-8
_LOG_TINY = math.log(np.finfo(float).tiny)


@dataclass(frozen=True)
class EnsembleParams:
    s: complex
    N: int

    def __post_init__(self):
        s = complex(self.s)
        if not (math.isfinite(s.real) and math.isfinite(s.imag)):
            raise DomainError(f"s must be finite, got {s}")
        if not s.real > -0.5:
            raise DomainError(f"Re s must exceed -1/2, got {s.real}")
        if int(self.N) != self.N or not 1 <= self.N <= N_MAX:
            raise DomainError(f"N must be an integer in [1, {N_MAX}], got {self.N}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "N", int(self.N))

    @property
    def a(self):
        return self.s.real

    @property
    def b(self):
        return self.s.imag

    def conj(self):
        return EnsembleParams(self.s.conjugate(), self.N)


@dataclass(frozen=True)
class PolyEval:
    value: float
    derivative: float


def _as_params(params):
    return params if isinstance(params, EnsembleParams) else EnsembleParams(*params)


# ---------------------------------------------------------------------------
# weight


def log_weight_phi(x, params):
    """Natural log of the weight; works on scalars and arrays."""
    p = _as_params(params)
    x = np.asarray(x, dtype=float)
    ax = np.maximum(np.abs(x), 1.0)
    # log(1 + x^2) without overflowing x^2
    l1 = 2.0 * np.log(ax) + np.log1p((np.minimum(np.abs(x), 1.0) / ax) ** 2)
    out = -(p.a + p.N) * l1 + 2.0 * p.b * np.arctan(x)
    return out if out.ndim else float(out)


def weight_phi(x, params):
    lw = log_weight_phi(x, params)
    if np.any(np.asarray(lw) < _LOG_TINY):
        raise Underflow("weight below the representable range; use log_weight_phi")
    return np.exp(lw) if isinstance(lw, np.ndarray) else math.exp(lw)


# ---------------------------------------------------------------------------
# recurrence coefficients


def _exists(m, p):
    return m < p.a + p.N - 0.5


def recurrence_coefficients(n, params):
    """B_m, C_m for m = 0..n-1 so that p_{m+1} = (x - B_m) p_m - C_m p_{m-1}."""
    p = _as_params(params)
    a, b, N, s = p.a, p.b, p.N, p.s
    m = np.arange(n + 1, dtype=float)
    k = N - m
    den = 2 * a + 2 * k
    with np.errstate(divide="ignore", invalid="ignore"):
        e = np.where(m == 0, 0.0, -2.0 * m * b / den)
    if b == 0.0:
        e[:] = 0.0
    B = e[:-1] - e[1:]
    mm, kk = m[:-1], k[:-1]
    d = 2 * a + 2 * kk
    C = 4 * mm * np.abs(s + kk) ** 2 * (2 * a + N + kk) / ((d - 1) * d * d * (d + 1))
    C[0] = 0.0
    return B, C


def _hat_coefficients(params):
    """Coefficients ending in the real polynomial Re p~_N (finite for Re s > -1/2)."""
    p = params
    B, C = recurrence_coefficients(p.N, p)
    m = p.N - 1
    e_prev = 0.0 if (m == 0 or p.b == 0.0) else -2.0 * m * p.b / (2 * p.a + 2)
    B[-1] = e_prev + 2.0 * p.N * p.b / (2 * p.a + 1)
    return B, C


def _run(x, B, C, n):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return x, _backend.ops_recurrence(x, B, C, n)


def _unscale(res, x, n):
    """(p_n, p_n', p_n'', p_{n-1}, p_{n-1}') from the scaled recurrence output."""
    rho = np.hypot(1.0, x)
    ls = res[6]
    lr = np.log(rho)
    val = res[0] * np.exp(ls + n * lr)
    der = res[2] * np.exp(ls + (n - 1) * lr)
    dd = res[4] * np.exp(ls + (n - 2) * lr)
    val1 = res[1] * np.exp(ls + (n - 1) * lr)
    der1 = res[3] * np.exp(ls + (n - 2) * lr)
    return val, der, dd, val1, der1


# ---------------------------------------------------------------------------
# polynomials


def _closed_form_s0(m, x, N):
    """Exact s = 0 forms of p_N and p_{N-1}."""
    x = np.asarray(x, dtype=float)
    rho = np.hypot(1.0, x)
    th = np.arctan2(1.0, x)
    if m == N:
        return rho**N * np.cos(N * th), N * rho ** (N - 1) * np.cos((N - 1) * th)
    val = rho**N * np.sin(N * th) / N
    der = rho ** (N - 1) * np.sin((N - 1) * th)
    return val, der


def _check_degree(m, p):
    if int(m) != m or m < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {m}")
    m = int(m)
    if m == p.N and p.a == 0.0 and p.b != 0.0:
        raise NotDefined("p_N is singular on the line Re s = 0; use poly_p_tilde")
    if not _exists(m, p) and not (m == p.N and p.a > -0.5):
        raise NotDefined(f"p_{m} needs m < Re s + N - 1/2 (Re s={p.a}, N={p.N})")
    return m


def poly_p_array(m, x, params, derivs=1):
    """Monic p_m and its derivatives at an array of points.

    Returns a tuple of ``derivs + 1`` arrays.
    """
    p = _as_params(params)
    m = _check_degree(m, p)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if p.s == 0 and m in (p.N - 1, p.N) and m >= 1 and derivs <= 1:
        out = _closed_form_s0(m, x, p.N)
        return out[: derivs + 1]
    if m == 0:
        zeros = np.zeros_like(x)
        return (np.ones_like(x), zeros, zeros)[: derivs + 1]
    B, C = recurrence_coefficients(m, p)
    x, res = _run(x, B, C, m)
    val, der, dd, _, _ = _unscale(res, x, m)
    return (val, der, dd)[: derivs + 1]


def poly_p(m, x, params):
    val, der = poly_p_array(m, [x], params)
    return PolyEval(float(val[0]), float(der[0]))


def poly_p_series(m, x, params):
    """p_m from its hypergeometric representation; cross-check for the recurrence.

    The complex sum must come out real; a relative imaginary residue above
    1e-9 raises ImaginaryLeak.
    """
    p = _as_params(params)
    m = _check_degree(m, p)
    if m == p.N and p.a == 0.0:
        return float(_closed_form_s0(m, np.array([x]), p.N)[0][0])
    x = float(x)
    z = 2.0 / (1.0 + 1j * x)
    f = gauss_2f1_terminating_array(m, p.s + p.N - m, 2 * p.a + 2 * p.N - 2 * m, np.array([z]))[0]
    val = (x - 1j) ** m * f
    if abs(val.imag) > 1e-9 * max(abs(val), 1e-300):
        raise ImaginaryLeak(f"p_{m}({x}) imaginary residue {val.imag:.3e}")
    return float(val.real)


def poly_p_tilde(x, params):
    """The degree-N polynomial p~_N, finite on all of Re s > -1/2.

    It is complex: its real part is a real-coefficient polynomial and its
    imaginary part is ``-N/(2 Re s + 1) * p_{N-1}``.
    """
    p = _as_params(params)
    val, der = poly_p_tilde_array([x], p)
    return PolyEval(complex(val[0]), complex(der[0]))


def poly_p_hat_array(x, params, derivs=1):
    """Real part of p~_N and its derivatives."""
    p = _as_params(params)
    B, C = _hat_coefficients(p)
    x, res = _run(x, B, C, p.N)
    val, der, dd, _, _ = _unscale(res, x, p.N)
    return (val, der, dd)[: derivs + 1]


def poly_p_tilde_array(x, params):
    p = _as_params(params)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    hv, hd = poly_p_hat_array(x, p)
    if p.N == 1:
        pv, pd = np.ones_like(x), np.zeros_like(x)
    else:
        B, C = recurrence_coefficients(p.N - 1, p)
        _, res = _run(x, B, C, p.N - 1)
        pv, pd, _, _, _ = _unscale(res, x, p.N - 1)
    c = p.N / (2 * p.a + 1)
    return hv - 1j * c * pv, hd - 1j * c * pd


def poly_p_tilde_series(x, params):
    """p~_N from its hypergeometric representation (complex)."""
    p = _as_params(params)
    x = float(x)
    z = 2.0 / (1.0 + 1j * x)
    f = gauss_2f1_terminating_array(p.N, p.s, 2 * p.a + 1, np.array([z]))[0]
    return complex((x - 1j) ** p.N * f)


# ---------------------------------------------------------------------------
# norms and kernel


def log_norm_sq(m, params):
    p = _as_params(params)
    if int(m) != m or m < 0 or not _exists(m, p):
        raise NotDefined(f"p_{m} needs m < Re s + N - 1/2 (Re s={p.a}, N={p.N})")
    a, s, N = p.a, p.s, p.N
    k = N - m
    val = (
        math.log(math.pi)
        - 2 * a * math.log(2.0)
        - 2 * (k - 1) * math.log(2.0)
        + log_gamma_complex(2 * a + 2 * k - 1)
        + log_gamma_complex(2 * a + 2 * k)
        + log_gamma_complex(m + 1)
        - log_gamma_complex(s + k)
        - log_gamma_complex(s.conjugate() + k)
        - log_gamma_complex(2 * a + 2 * N - m)
    )
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ImaginaryLeak(f"norm of p_{m} has imaginary log residue {val.imag:.3e}")
    return float(val.real)


def norm_sq(m, params):
    return math.exp(log_norm_sq(m, params))


def kernel_prefactor(params):
    """1 / ||p_{N-1}||^2, the constant in front of the two-term kernel."""
    p = _as_params(params)
    return math.exp(-log_norm_sq(p.N - 1, p))


def _kernel_parts(x, p, B, C):
    """Scaled pieces per point: (F, G, F', G') with F = p_N sqrt(phi),
    G = p_{N-1} sqrt(phi) and primes carrying the matching factors."""
    x, res = _run(x, B, C, p.N)
    rho = np.hypot(1.0, x)
    lr = np.log(rho)
    ang = np.arctan(x)
    common = res[6] - p.a * lr + p.b * ang
    F = res[0] * np.exp(common)
    G = res[1] * np.exp(common - lr)
    # derivative pieces share one more factor of 1/rho
    Fd = res[2] * np.exp(common - lr)
    Gd = res[3] * np.exp(common - 2 * lr)
    return x, F, G, Fd, Gd


def _cd_matrix(x1, x2, p, B, C):
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    pref = kernel_prefactor(p)
    _, F1, G1, Fd1, Gd1 = _kernel_parts(x1, p, B, C)
    _, F2, G2, Fd2, Gd2 = _kernel_parts(x2, p, B, C)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    diff = X1 - X2
    num = F1[:, None] * G2[None, :] - G1[:, None] * F2[None, :]
    close = np.abs(diff) < CONFLUENT_REL * (1.0 + np.abs(X1))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(close, 0.0, num / np.where(close, 1.0, diff))
    if close.any():
        conf = (Fd1 * G1 - Gd1 * F1)[:, None] * np.ones_like(diff)
        out = np.where(close, conf, out)
    return pref * out


def cd_kernel_matrix(x1, x2, params):
    """Kernel values K(x1[i], x2[j]) as a len(x1) x len(x2) array."""
    p = _as_params(params)
    B, C = _hat_coefficients(p)
    return _cd_matrix(x1, x2, p, B, C)


def cd_kernel(x1, x2, params):
    """Christoffel-Darboux correlation kernel of the N-point ensemble."""
    # evaluate with sorted arguments so that the swap symmetry is exact
    lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
    return float(cd_kernel_matrix([lo], [hi], params)[0, 0])


def cd_kernel_via_pn(x1, x2, params):
    """Same kernel built from p_N itself; only available off the line Re s = 0."""
    p = _as_params(params)
    if p.a == 0.0 and p.b != 0.0:
        raise NotDefined("p_N is singular on the line Re s = 0")
    B, C = recurrence_coefficients(p.N, p)
    return float(_cd_matrix([x1], [x2], p, B, C)[0, 0])


def kernel_diagonal(x, params):
    """K(x, x) on an array of points."""
    p = _as_params(params)
    B, C = _hat_coefficients(p)
    x, F, G, Fd, Gd = _kernel_parts(np.asarray(x, dtype=float), p, B, C)
    return kernel_prefactor(p) * (Fd * G - Gd * F)


# ---------------------------------------------------------------------------
# correlation functions


def _det_checked(M):
    d = float(np.linalg.det(M))
    if d < -1e-10:
        raise NegativeDeterminant(f"correlation determinant {d:.3e} is negative")
    return max(d, 0.0)


def correlation_fn(points, params):
    """n-point correlation function as the determinant of kernel values."""
    pts = np.asarray(points, dtype=float)
    if not 1 <= pts.size <= 8:
        raise DomainError("correlation_fn supports 1 to 8 points")
    M = cd_kernel_matrix(pts, pts, params)
    M = 0.5 * (M + M.T)
    return _det_checked(M)


def scaled_correlation(points, params):
    """Correlation function after the x -> N x rescaling."""
    p = _as_params(params)
    pts = np.asarray(points, dtype=float)
    if np.any(pts == 0):
        raise DomainError("scaled correlation is defined on nonzero points only")
    return p.N**pts.size * correlation_fn(p.N * pts, p)


# ---------------------------------------------------------------------------
# differential equation


def ode_residual(m, x, params, relative=False):
    """Residual of the second-order ODE satisfied by p_m at x."""
    p = _as_params(params)
    if m == 0:
        return 0.0
    val, der, dd = (float(v[0]) for v in poly_p_array(m, [x], p, derivs=2))
    t1 = -(1 + x * x) * dd
    t2 = 2 * (-p.b + (p.a + p.N - 1) * x) * der
    t3 = m * (m + 1 - 2 * p.a - 2 * p.N) * val
    r = t1 + t2 + t3
    if relative:
        scale = abs(t1) + abs(t2) + abs(t3)
        return r / scale if scale else 0.0
    return r
