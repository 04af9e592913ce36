"""The N -> infinity correlation kernel on the punctured line and its uses.

The kernel has the integrable form

    K(x', x'') = c(s) Re[P~(x') Q(x'') - Q(x') P~(x'')] / (x' - x'')

with ``P~`` and ``Q`` built from Kummer functions at ``2i/x``.  Fredholm
determinants on ``(1/t, inf)`` are computed after the substitution ``u = 1/x``,
which turns the kernel into a smooth one on ``(0, t)`` (the sine kernel when
``s = 0``).
"""
from dataclasses import dataclass
import cmath
import math

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .configuration import PointConfiguration
from .errors import DomainError, ImaginaryLeak, NonPositive, NotDefined
from .pseudo_jacobi import EnsembleParams, cd_kernel_matrix
from .specialfns import bessel_j, kummer_1f1_array, log_gamma_complex

X_FLOOR = 0.01
CONFLUENT_REL = 1e-8


@dataclass(frozen=True)
class LimitKernelParams:
    s: complex

    def __post_init__(self):
        s = complex(self.s)
        if not s.real > -0.5:
            raise DomainError(f"Re s must exceed -1/2, got {s.real}")
        object.__setattr__(self, "s", s)

    @property
    def a(self):
        return self.s.real

    @property
    def b(self):
        return self.s.imag


@dataclass(frozen=True)
class QuadratureGrid:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple


def _as_params(params):
    if isinstance(params, LimitKernelParams):
        return params
    if isinstance(params, EnsembleParams):
        return LimitKernelParams(params.s)
    return LimitKernelParams(params)


def _check_x(x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) < X_FLOOR) or not np.all(np.isfinite(x)):
        raise DomainError(f"limit kernel needs finite |x| >= {X_FLOOR}")
    return x


def prefactor(params):
    """c(s) = Gamma(s+1) Gamma(conj s + 1) / (2 pi Gamma(2Re s+1) Gamma(2Re s+2))."""
    p = _as_params(params)
    s, a = p.s, p.a
    lg = (
        log_gamma_complex(s + 1)
        + log_gamma_complex(s.conjugate() + 1)
        - log_gamma_complex(2 * a + 1)
        - log_gamma_complex(2 * a + 2)
    )
    return math.exp(lg.real) / (2 * math.pi)


def _envelope(x, p):
    """|2/x|^Re s exp(-i/x + pi Im s sgn(x) / 2)."""
    return np.abs(2.0 / x) ** p.a * np.exp(-1j / x + 0.5 * math.pi * p.b * np.sign(x))


def _check_real(vals, what):
    vals = np.asarray(vals)
    bad = np.abs(vals.imag) > 1e-9 * np.maximum(np.abs(vals), 1e-300)
    if np.any(bad):
        raise ImaginaryLeak(f"{what} has a relative imaginary residue above 1e-9")
    return vals.real


def _pq_tilde(x, p, derivs=False):
    """Complex P~ and real-valued Q (held as complex) with optional x-derivatives."""
    s, a = p.s, p.a
    z = 2j / x
    E = _envelope(x, p)
    F = kummer_1f1_array(s, 2 * a + 1, z)
    G = kummer_1f1_array(s + 1, 2 * a + 2, z)
    Pt = E * F
    Q = (2.0 / x) * E * G
    if not derivs:
        return Pt, Q
    Fd = (s / (2 * a + 1)) * G
    Gd = ((s + 1) / (2 * a + 2)) * kummer_1f1_array(s + 2, 2 * a + 3, z)
    dz = -2j / x**2
    lead = -a / x + 1j / x**2
    Ptd = E * (lead * F + Fd * dz)
    Qd = (2.0 / x) * E * ((lead - 1.0 / x) * G + Gd * dz)
    return Pt, Q, Ptd, Qd


def fn_P(x, params):
    """P(x); requires Re s != 0 unless s = 0 exactly (then cos(1/x))."""
    p = _as_params(params)
    xs = _check_x(x)
    if p.s == 0:
        out = np.cos(1.0 / xs)
    else:
        if p.a == 0.0:
            raise NotDefined("P is singular on the line Re s = 0; use fn_P_tilde")
        vals = _envelope(xs, p) * kummer_1f1_array(p.s, 2 * p.a, 2j / xs)
        out = _check_real(vals, "P")
    return out if np.ndim(x) else float(out[0])


def fn_Q(x, params):
    p = _as_params(params)
    xs = _check_x(x)
    _, Q = _pq_tilde(xs, p)
    out = _check_real(Q, "Q")
    return out if np.ndim(x) else float(out[0])


def fn_P_tilde(x, params):
    """P~(x), finite on all of Re s > -1/2.  Complex valued."""
    p = _as_params(params)
    xs = _check_x(x)
    Pt, _ = _pq_tilde(xs, p)
    return Pt if np.ndim(x) else complex(Pt[0])


def fn_P_bessel(x, params):
    """P for real s through J_{s-1/2}."""
    p = _as_params(params)
    if p.b != 0.0:
        raise DomainError("the Bessel form needs real s")
    s = p.a
    x = float(x)
    ax = abs(x)
    return 2 ** (2 * s - 0.5) * math.gamma(s + 0.5) * ax**-0.5 * bessel_j(s - 0.5, 1.0 / ax)


def fn_Q_bessel(x, params):
    """Q for real s through J_{s+1/2}."""
    p = _as_params(params)
    if p.b != 0.0:
        raise DomainError("the Bessel form needs real s")
    s = p.a
    x = float(x)
    ax = abs(x)
    return math.copysign(1.0, x) * 2 ** (2 * s + 1.5) * math.gamma(s + 1.5) * ax**-0.5 * bessel_j(s + 0.5, 1.0 / ax)


def whittaker_M(kappa, mu, t):
    """Whittaker M_{kappa,mu}(t) = exp(-t/2) t^(mu+1/2) 1F1(mu-kappa+1/2; 1+2mu; t)."""
    kappa, mu, t = complex(kappa), complex(mu), complex(t)
    if t == 0:
        return 0j
    f = kummer_1f1_array(mu - kappa + 0.5, 1 + 2 * mu, np.array([t]))[0]
    return complex(cmath.exp(-t / 2 + (mu + 0.5) * cmath.log(t)) * f)


def fn_P_whittaker(x, params):
    p = _as_params(params)
    sg = math.copysign(1.0, x)
    val = cmath.exp(-0.5j * math.pi * p.s * sg) * whittaker_M(-1j * p.b, p.a - 0.5, 2j / x)
    return val


def fn_Q_whittaker(x, params):
    p = _as_params(params)
    sg = math.copysign(1.0, x)
    val = sg * cmath.exp(-0.5j * math.pi * (p.s + 1) * sg) * whittaker_M(-1j * p.b, p.a + 0.5, 2j / x)
    return val


def kernel_inf_matrix(x1, x2, params):
    """Limit kernel K(x1[i], x2[j]) as a len(x1) x len(x2) array."""
    p = _as_params(params)
    x1 = _check_x(x1)
    x2 = _check_x(x2)
    c = prefactor(p)
    P1, Q1, Pd1, Qd1 = _pq_tilde(x1, p, derivs=True)
    P2, Q2 = _pq_tilde(x2, p)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    diff = X1 - X2
    num = (P1[:, None] * Q2[None, :] - Q1[:, None] * P2[None, :]).real
    close = np.abs(diff) < CONFLUENT_REL * (1.0 + np.abs(X1))
    out = num / np.where(close, 1.0, diff)
    if close.any():
        diag = (Pd1 * Q1 - Qd1 * P1).real
        out = np.where(close, diag[:, None] * np.ones_like(diff), out)
    return c * out


def kernel_inf(x1, x2, params):
    lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
    return float(kernel_inf_matrix([lo], [hi], params)[0, 0])


def sine_kernel_form(x1, x2):
    """The s = 0 kernel written with trigonometric functions."""
    if abs(x1 - x2) < CONFLUENT_REL * (1 + abs(x1)):
        return 1.0 / (math.pi * x1 * x1)
    return math.sin(1.0 / x2 - 1.0 / x1) / (math.pi * (x1 - x2))


# ---------------------------------------------------------------------------
# change of variables y = -1/(pi x)


def to_sine_coordinates(config):
    pts = config.as_array() if isinstance(config, PointConfiguration) else np.asarray(config, float)
    if np.any(pts == 0):
        raise DomainError("cannot map the point 0")
    return PointConfiguration(tuple(-1.0 / (math.pi * pts)))


def from_sine_coordinates(config):
    pts = config.as_array() if isinstance(config, PointConfiguration) else np.asarray(config, float)
    if np.any(pts == 0):
        raise DomainError("cannot map the point 0")
    return PointConfiguration(tuple(-1.0 / (math.pi * pts)))


def kernel_inf_sine_coordinates(y1, y2, params):
    """Limit kernel transported to y = -1/(pi x), including sqrt of Jacobians.

    At s = 0 this equals sgn(y1 y2) sin(pi(y1-y2)) / (pi(y1-y2)); the sign
    is a diagonal gauge and leaves all correlation determinants unchanged.
    """
    x1 = -1.0 / (math.pi * y1)
    x2 = -1.0 / (math.pi * y2)
    jac = 1.0 / (math.pi * abs(y1 * y2))
    return kernel_inf(x1, x2, params) * jac


# ---------------------------------------------------------------------------
# Fredholm determinants


def gauss_legendre(lo, hi, order):
    t, w = roots_legendre(order)
    half = 0.5 * (hi - lo)
    return QuadratureGrid(lo + half * (t + 1.0), half * w, (lo, hi))


def _reduced_parts(u, p, derivs=False):
    """P~ and Q after u = 1/x with the u^Re s factor removed (u > 0)."""
    s, a = p.s, p.a
    z = 2j * u
    pre = 2.0**a * np.exp(-1j * u + 0.5 * math.pi * p.b)
    F = kummer_1f1_array(s, 2 * a + 1, z)
    G = kummer_1f1_array(s + 1, 2 * a + 2, z)
    Pr = pre * F
    Qr = 2 * u * pre * G
    if not derivs:
        return Pr, Qr
    Fd = (s / (2 * a + 1)) * G
    Gd = ((s + 1) / (2 * a + 2)) * kummer_1f1_array(s + 2, 2 * a + 3, z)
    Prd = pre * (-1j * F + 2j * Fd)
    Qrd = 2 * pre * (G + u * (-1j * G + 2j * Gd))
    return Pr, Qr, Prd, Qrd


def reduced_kernel_matrix(u1, u2, params):
    """H(u1, u2) = K(1/u1, 1/u2) / (u1 u2)^(Re s + 1) on positive u."""
    p = _as_params(params)
    u1 = np.atleast_1d(np.asarray(u1, dtype=float))
    u2 = np.atleast_1d(np.asarray(u2, dtype=float))
    c = prefactor(p)
    P1, Q1, Pd1, Qd1 = _reduced_parts(u1, p, derivs=True)
    P2, Q2 = _reduced_parts(u2, p)
    U1, U2 = np.meshgrid(u1, u2, indexing="ij")
    diff = U2 - U1
    num = (P1[:, None] * Q2[None, :] - Q1[:, None] * P2[None, :]).real
    close = np.abs(diff) < CONFLUENT_REL * (1.0 + np.abs(U1))
    out = num / np.where(close, 1.0, diff)
    if close.any():
        diag = (P1 * Qd1 - Q1 * Pd1).real
        out = np.where(close, diag[:, None] * np.ones_like(diff), out)
    return c * out


def _jacobi_grid(t, order, a):
    """Nodes and weights on (0, t) for the weight u^(2a)."""
    xs, ws = roots_jacobi(order, 0.0, 2 * a)
    u = 0.5 * t * (xs + 1.0)
    w = ws * (0.5 * t) ** (2 * a + 1)
    return u, w


def _tail_system(t, p, order):
    u, w = _jacobi_grid(t, order, p.a)
    H = reduced_kernel_matrix(u, u, p)
    sw = np.sqrt(w)
    return u, w, H, np.eye(order) - sw[:, None] * H * sw[None, :]


def _finite_det(lo, hi, p, order):
    g = gauss_legendre(lo, hi, order)
    K = kernel_inf_matrix(g.nodes, g.nodes, p)
    K = 0.5 * (K + K.T)
    sw = np.sqrt(g.weights)
    return float(np.linalg.det(np.eye(order) - sw[:, None] * K * sw[None, :]))


def _det_once(p, lo, hi, order):
    if lo == hi:
        return 1.0
    if lo < 0 and hi <= 0:
        # reflection x -> -x exchanges s and conj(s)
        return _det_once(LimitKernelParams(p.s.conjugate()), -hi, -lo, order)
    if lo < 0 < hi:
        raise DomainError("interval must not contain 0")
    if math.isinf(hi):
        _, _, _, M = _tail_system(1.0 / lo, p, order)
        return float(np.linalg.det(M))
    _check_x([lo, hi])
    return _finite_det(lo, hi, p, order)


def fredholm_det(params, interval, order=40, return_error=False):
    """det(1 - K) restricted to an interval of one sign (hi may be inf).

    With ``return_error`` the result is ``(value, estimate)`` where the estimate
    is the change when the order is doubled.
    """
    p = _as_params(params)
    lo, hi = float(interval[0]), float(interval[1])
    if hi < lo:
        raise DomainError("interval must satisfy lo <= hi")
    if int(order) != order or not 1 <= order <= 400:
        raise DomainError("order must be an integer in [1, 400]")
    val = _det_once(p, lo, hi, order)
    if val <= 0:
        raise NonPositive(f"Fredholm determinant {val:.3e} is not positive")
    if not return_error:
        return val
    if 2 * order <= 400:
        fine = _det_once(p, lo, hi, 2 * order)
        return fine, abs(fine - val)
    return val, float("nan")


def log_det_tail(t, params, order=40):
    """log det(1 - K) on (1/t, inf)."""
    p = _as_params(params)
    _, _, _, M = _tail_system(t, p, order)
    sign, logdet = np.linalg.slogdet(M)
    if sign <= 0:
        raise NonPositive("Fredholm determinant is not positive")
    return float(logdet)


def sigma(t, params, order=40):
    """sigma(t) = t d/dt log det(1 - K) on (1/t, inf), via the resolvent at the edge."""
    p = _as_params(params)
    u, w, H, M = _tail_system(t, p, order)
    h = reduced_kernel_matrix(u, [t], p)[:, 0]
    # solve (I - H W) r = h in the symmetrised form
    sw = np.sqrt(w)
    r = np.linalg.solve(M, sw * h) / sw
    Htt = reduced_kernel_matrix([t], [t], p)[0, 0]
    R = Htt + np.dot(w * h, r)
    # the kernel measure carries u^(2 Re s); restore it at the endpoint
    return float(-t * t ** (2 * p.a) * R)


def _richardson_derivs(f, t, h):
    def d1(step):
        return (f(t + step) - f(t - step)) / (2 * step)

    def d2(step, f0):
        return (f(t + step) - 2 * f0 + f(t - step)) / (step * step)

    f0 = f(t)
    D1 = (4 * d1(h / 2) - d1(h)) / 3
    D2 = (4 * d2(h / 2, f0) - d2(h, f0)) / 3
    return f0, D1, D2


def painleve_sides(t, params, h=None, order=40):
    """Both sides of the sigma-form Painleve V equation at t."""
    p = _as_params(params)
    if h is None:
        h = 1e-3 * t
    s = p.s
    sg, d1, d2 = _richardson_derivs(lambda v: sigma(v, p, order), t, h)
    lhs = -((t * d2) ** 2)
    inner = 2 * (t * d1 - sg) + d1 * d1 + 1j * (s.conjugate() - s) * d1
    rhs = inner**2 - d1 * d1 * (d1 - 2j * s) * (d1 + 2j * s.conjugate())
    if abs(rhs.imag) > 1e-6 * max(abs(rhs), 1e-300):
        raise ImaginaryLeak("Painleve right-hand side is not real")
    return lhs, rhs.real


def painleve_residual(t, params, h=None, order=40, relative=True):
    """|LHS - RHS| of the sigma-PV equation (relative to the larger side by default)."""
    if not t > 0:
        raise DomainError("t must be positive")
    lhs, rhs = painleve_sides(t, params, h, order)
    r = abs(lhs - rhs)
    if relative:
        return r / max(abs(lhs), abs(rhs), 1e-300)
    return r


# ---------------------------------------------------------------------------
# finite N versus the limit


def kernel_convergence_gap(x1, x2, params, N):
    """|(sgn x1 sgn x2)^N N K_N(N x1, N x2) - K_inf(x1, x2)|."""
    p = _as_params(params)
    for v in (x1, x2):
        if not 0.05 <= abs(v) <= 20:
            raise DomainError("gap is evaluated for 0.05 <= |x| <= 20")
    ep = EnsembleParams(p.s, N)
    sign = (math.copysign(1.0, x1) * math.copysign(1.0, x2)) ** N
    lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
    kn = N * float(cd_kernel_matrix([N * lo], [N * hi], ep)[0, 0])
    return abs(sign * kn - kernel_inf(lo, hi, p))


def kernel_convergence_gap_grid(xs, params, N):
    """Gap on the product grid xs x xs, vectorised."""
    p = _as_params(params)
    xs = np.asarray(xs, dtype=float)
    ep = EnsembleParams(p.s, N)
    sg = np.sign(xs)
    kn = N * cd_kernel_matrix(N * xs, N * xs, ep)
    kn = 0.5 * (kn + kn.T)
    ki = kernel_inf_matrix(xs, xs, p)
    ki = 0.5 * (ki + ki.T)
    sign = np.outer(sg, sg) ** N
    return np.abs(sign * kn - ki)
