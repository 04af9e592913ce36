"""Monte Carlo sampling of Hua-Pickrell random matrices and related formulas.

A matrix of size N is grown from size N-1 by one bordering step.  In the
eigenbasis of the current corner ``Y = V diag(y) V*`` the new column and
corner entry are

    xi_j = sqrt(1 + y_j^2) sqrt(r) eta_j,
    t    = (1 + r) tau + sum_j |xi_j|^2 y_j / (1 + y_j^2),

with ``r = B / (1 - B)``, ``B ~ Beta(N-1, 2 Re s + N)``, ``eta`` uniform on the
complex unit sphere, and ``tau`` drawn from the density proportional to
``(1 + tau^2)^(-Re s - N) exp(2 Im s arctan tau)``.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, EigenFailure, NotInHalfplane
from .specialfns import log_gamma_complex

N_CAP = 200
EIG_BACKWARD_TOL = 1e-12


def make_rng(seed):
    """Seeded generator; identical seeds give identical streams."""
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def _check_s(s):
    s = complex(s)
    if not s.real > -0.5:
        raise DomainError(f"Re s must exceed -1/2, got {s.real}")
    return s


@dataclass(frozen=True)
class ZetaChain:
    zeta1: float
    zetas: tuple


# ---------------------------------------------------------------------------
# one-dimensional laws


def _symmetric_tau(c, rng, size):
    """Exact draws from the density proportional to (1 + t^2)^(-c), c > 1/2."""
    w = rng.beta(c - 0.5, c - 0.5, size=size)
    return (2.0 * w - 1.0) / (2.0 * np.sqrt(w * (1.0 - w)))


def sample_tau(c, b, rng, size=None):
    """Draws with density proportional to (1+t^2)^(-c) exp(2 b arctan t).

    Rejection from the b = 0 law; acceptance is at least exp(-pi |b|).
    """
    n = 1 if size is None else int(np.prod(size))
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        t = _symmetric_tau(c, rng, todo.size)
        if b == 0.0:
            out[todo] = t
            break
        u = rng.random(todo.size)
        ok = u < np.exp(2.0 * b * np.arctan(t) - math.pi * abs(b))
        out[todo[ok]] = t[ok]
        todo = todo[~ok]
    if size is None:
        return float(out[0])
    return out.reshape(size)


def sample_mu1(s, rng, size=None):
    """First diagonal entry: density proportional to (1+t^2)^(-Re s-1) e^(2 Im s arctan t)."""
    s = _check_s(s)
    return sample_tau(s.real + 1.0, s.imag, rng, size)


def mu1_density(t, s):
    s = _check_s(s)
    a, b = s.real, s.imag
    lognorm = (
        2 * a * math.log(2.0)
        + 2 * log_gamma_complex(s + 1).real
        - math.log(math.pi)
        - log_gamma_complex(2 * a + 1).real
    )
    t = np.asarray(t, dtype=float)
    return np.exp(lognorm - (a + 1) * np.log1p(t * t) + 2 * b * np.arctan(t))


def sample_r(N, s, rng, size=None):
    """Real part of zeta_N: a beta-prime law with shapes (N-1, 2 Re s + N)."""
    s = _check_s(s)
    B = rng.beta(N - 1, 2 * s.real + N, size=size)
    return B / (1.0 - B)


def r_density(r, N, s):
    """Density of Re zeta_N, proportional to (1+r)^(-2Re s-2N+1) r^(N-2)."""
    s = _check_s(s)
    a = s.real
    lognorm = math.lgamma(2 * a + 2 * N - 1) - math.lgamma(N - 1) - math.lgamma(2 * a + N)
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        return np.exp(lognorm + (N - 2) * np.log(r) - (2 * a + 2 * N - 1) * np.log1p(r))


def sample_muN(N, s, rng, size=None):
    """zeta = r + i T in the right half-plane with T = (1 + r) tau."""
    s = _check_s(s)
    if N < 2:
        raise DomainError("sample_muN needs N >= 2")
    r = sample_r(N, s, rng, size)
    tau = sample_tau(s.real + N, s.imag, rng, size)
    z = r + 1j * (1.0 + r) * tau
    return complex(z) if size is None else z


# ---------------------------------------------------------------------------
# matrices


def _eigh_checked(Y):
    y, V = np.linalg.eigh(Y)
    scale = max(np.linalg.norm(Y, 2) if Y.size else 0.0, np.finfo(float).tiny)
    resid = np.linalg.norm(Y @ V - V * y, 2)
    if resid > EIG_BACKWARD_TOL * scale * max(1.0, Y.shape[0] / 16):
        raise EigenFailure(f"eigendecomposition backward error {resid / scale:.2e}")
    return y, V


def _sphere(m, rng, size=None):
    shape = (m,) if size is None else (size, m)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def extend_corner(Y, s, rng):
    """Border an (N-1) x (N-1) Hermitian matrix to an N x N Hua-Pickrell draw."""
    s = _check_s(s)
    Y = np.asarray(Y, dtype=complex)
    m = Y.shape[0]
    N = m + 1
    if m == 0:
        return np.array([[sample_mu1(s, rng)]], dtype=complex)
    y, V = _eigh_checked(Y)
    r = sample_r(N, s, rng)
    tau = sample_tau(s.real + N, s.imag, rng)
    eta = _sphere(m, rng)
    q = 1.0 + y * y
    xi_eig = np.sqrt(q) * math.sqrt(r) * eta
    t = (1.0 + r) * tau + float(np.sum(np.abs(xi_eig) ** 2 * y / q))
    xi = V @ xi_eig
    X = np.empty((N, N), dtype=complex)
    X[:m, :m] = Y
    X[:m, m] = xi
    X[m, :m] = xi.conj()
    X[m, m] = t
    return X


def sample_matrix(N, s, rng):
    """One draw of size N built by repeated bordering."""
    if not 1 <= N <= N_CAP:
        raise DomainError(f"N must lie in [1, {N_CAP}]")
    X = np.zeros((0, 0), dtype=complex)
    for _ in range(N):
        X = extend_corner(X, s, rng)
    return X


def sample_matrices(N, s, rng, count):
    """``count`` independent draws as an array of shape (count, N, N)."""
    s = _check_s(s)
    if not 1 <= N <= N_CAP:
        raise DomainError(f"N must lie in [1, {N_CAP}]")
    X = np.zeros((count, N, N), dtype=complex)
    X[:, 0, 0] = sample_mu1(s, rng, size=count)
    for m in range(1, N):
        n = m + 1
        y, V = np.linalg.eigh(X[:, :m, :m])
        r = sample_r(n, s, rng, count)
        tau = sample_tau(s.real + n, s.imag, rng, count)
        eta = _sphere(m, rng, count)
        q = 1.0 + y * y
        xi_eig = np.sqrt(q) * np.sqrt(r)[:, None] * eta
        t = (1.0 + r) * tau + np.sum(np.abs(xi_eig) ** 2 * y / q, axis=1)
        xi = np.einsum("kij,kj->ki", V, xi_eig)
        X[:, :m, m] = xi
        X[:, m, :m] = xi.conj()
        X[:, m, m] = t
    return X


def sample_spectra(N, s, rng, count, keep_all=False):
    """Eigenvalue chains only, via real arrowhead matrices.

    Returns ascending spectra of shape (count, N), or with ``keep_all`` a list
    whose entry n-1 holds the size-n corner spectra.
    """
    s = _check_s(s)
    y = sample_mu1(s, rng, size=count)[:, None]
    chain = [y]
    for m in range(1, N):
        n = m + 1
        r = sample_r(n, s, rng, count)
        tau = sample_tau(s.real + n, s.imag, rng, count)
        w = rng.dirichlet(np.ones(m), size=count)
        q = 1.0 + y * y
        mag2 = q * r[:, None] * w
        t = (1.0 + r) * tau + np.sum(mag2 * y / q, axis=1)
        A = np.zeros((count, n, n))
        idx = np.arange(m)
        A[:, idx, idx] = y
        A[:, :m, m] = np.sqrt(mag2)
        A[:, m, :m] = np.sqrt(mag2)
        A[:, m, m] = t
        y = np.linalg.eigvalsh(A)
        if keep_all:
            chain.append(y)
    return chain if keep_all else y


def zeta_chain(X):
    """Coordinates zeta_1 = X_11 and zeta_n = i t + xi* (1 + i Y)^(-1) xi."""
    X = np.asarray(X, dtype=complex)
    zetas = []
    for n in range(2, X.shape[0] + 1):
        Y = X[: n - 1, : n - 1]
        xi = X[: n - 1, n - 1]
        t = X[n - 1, n - 1].real
        sol = np.linalg.solve(np.eye(n - 1) + 1j * Y, xi)
        zetas.append(complex(1j * t + np.vdot(xi, sol)))
    return ZetaChain(float(X[0, 0].real), tuple(zetas))


# ---------------------------------------------------------------------------
# densities and affinities


def log_const_N(N, s):
    s = _check_s(s)
    a = s.real
    total = 0.0
    for j in range(1, N + 1):
        total += (
            j * math.log(math.pi)
            + log_gamma_complex(2 * a + j).real
            - (2 * a + 2 * j - 2) * math.log(2.0)
            - 2 * log_gamma_complex(s + j).real
        )
    return total


def log_density_msN(X, s):
    s = _check_s(s)
    X = np.asarray(X, dtype=complex)
    N = X.shape[0]
    x, _ = _eigh_checked(X)
    a, b = s.real, s.imag
    return float(np.sum(-(a + N) * np.log1p(x * x) + 2 * b * np.arctan(x)) - log_const_N(N, s))


def density_msN(X, s):
    """Hua-Pickrell density of the N x N corner at X."""
    return math.exp(log_density_msN(X, s))


def log_hellinger_affinity(s1, s2, N):
    s1, s2 = _check_s(s1), _check_s(s2)
    if N < 2:
        raise DomainError("the affinity formula needs N >= 2")
    if s1 == s2:
        return 0.0
    # fixed argument order keeps the value exactly symmetric
    if (s1.real, s1.imag) > (s2.real, s2.imag):
        s1, s2 = s2, s1
    s = 0.5 * (s1 + s2)

    def lg(z):
        return log_gamma_complex(z).real

    val = 0.5 * (
        2 * lg(s1 + N) + 2 * lg(s2 + N) - lg(2 * s1.real + N) - lg(2 * s2.real + N)
    ) + lg(2 * s.real + N) - 2 * lg(s + N)
    return min(val, 0.0)


def hellinger_affinity(s1, s2, N):
    """Overlap integral of the laws of zeta_N for parameters s1 and s2."""
    return math.exp(log_hellinger_affinity(s1, s2, N))


def hellinger_limit_estimate(s1, s2, Ns=(100, 200, 400)):
    """Richardson-extrapolated limit of N (1 - affinity)."""
    f = [n * -math.expm1(log_hellinger_affinity(s1, s2, n)) for n in Ns]
    # two levels for a 1/N expansion on a doubling sequence
    r1 = [2 * f[i + 1] - f[i] for i in range(len(f) - 1)]
    if len(r1) == 1:
        return r1[0]
    return (4 * r1[-1] - r1[-2]) / 3


def kakutani_divergence_report(s1, s2, N_max, fit_from=None):
    """Partial products of affinities over N = 2..N_max and a log-log slope."""
    s1, s2 = _check_s(s1), _check_s(s2)
    Ns = np.arange(2, int(N_max) + 1)
    logs = np.array([log_hellinger_affinity(s1, s2, int(n)) for n in Ns])
    logprod = np.cumsum(logs)
    if s1 == s2:
        return {"N": Ns, "partial_products": np.ones_like(logprod), "slope": 0.0,
                "expected_slope": 0.0}
    lo = fit_from if fit_from is not None else max(2, int(N_max) // 100)
    sel = Ns >= lo
    slope, _ = np.polyfit(np.log(Ns[sel]), logprod[sel], 1)
    return {
        "N": Ns,
        "partial_products": np.exp(logprod),
        "slope": float(slope),
        "expected_slope": -abs(s1 - s2) ** 2 / 4,
    }


def matrix_power(A, z):
    """A^z through the eigendecomposition with principal-branch logarithms."""
    lam, V = np.linalg.eig(A)
    return (V * np.exp(z * np.log(lam))) @ np.linalg.inv(V)


def block_det_identity_check(A, z, split):
    """Relative gap in det(A^z) = det(A11^z) det(S^z), S the Schur complement."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if not 0 < split < n:
        raise DomainError("split must lie strictly between 0 and the dimension")
    if np.linalg.eigvalsh(A + A.conj().T).min() <= 0:
        raise NotInHalfplane("A + A* is not positive definite")
    z = complex(z)
    A11 = A[:split, :split]
    A12 = A[:split, split:]
    A21 = A[split:, :split]
    A22 = A[split:, split:]
    S = A22 - A21 @ np.linalg.solve(A11, A12)
    if z == 1:
        lhs = np.linalg.det(A)
        rhs = np.linalg.det(A11) * np.linalg.det(S)
    else:
        lhs = np.linalg.det(matrix_power(A, z))
        rhs = np.linalg.det(matrix_power(A11, z)) * np.linalg.det(matrix_power(S, z))
    return float(abs(lhs - rhs) / max(abs(lhs), np.finfo(float).tiny))


def interlaces(mu, lam, slack=1e-12):
    """True when lam_1 >= mu_1 >= lam_2 >= ... (both sorted descending)."""
    mu = np.asarray(mu)
    lam = np.asarray(lam)
    tol = slack * max(1.0, np.max(np.abs(lam)))
    return bool(np.all(lam[:-1] >= mu - tol) and np.all(mu >= lam[1:] - tol))
