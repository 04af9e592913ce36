"""Spectral functionals, point configurations and Monte Carlo estimators."""
from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from .configuration import PointConfiguration
from .errors import DegenerateSpectrum, DomainError, NotSorted, TruncationInsufficient

KEEP = 64


def _desc(v):
    v = np.asarray(v, dtype=float)
    return np.sort(v)[::-1]


@dataclass(frozen=True)
class SpectralSummary:
    a_plus: np.ndarray
    a_minus: np.ndarray
    c: float
    d: float


@dataclass(frozen=True)
class OmegaPoint:
    alpha_plus: tuple = ()
    alpha_minus: tuple = ()
    gamma1: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        ap = _desc(self.alpha_plus)
        am = _desc(self.alpha_minus)
        if np.any(ap < 0) or np.any(am < 0):
            raise DomainError("alpha entries must be nonnegative")
        if self.delta < 0:
            raise DomainError("delta must be nonnegative")
        if np.sum(ap**2) + np.sum(am**2) > self.delta + 1e-12:
            raise DomainError("sum of squared alphas exceeds delta")
        object.__setattr__(self, "alpha_plus", tuple(ap))
        object.__setattr__(self, "alpha_minus", tuple(am))

    @property
    def gamma2(self):
        return self.delta - sum(v * v for v in self.alpha_plus) - sum(v * v for v in self.alpha_minus)


@dataclass(frozen=True)
class CorrelationEstimate:
    k: int
    boxes: list
    counts: np.ndarray
    n_samples: int
    stderr: np.ndarray
    totals: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class CornerChain:
    """One sampled matrix viewed through its growing upper-left corners."""

    matrix: np.ndarray

    def corner(self, n):
        return self.matrix[:n, :n]

    @property
    def size(self):
        return self.matrix.shape[0]


# ---------------------------------------------------------------------------
# summaries and configurations


def spectral_summary(lam, N=None, keep=KEEP):
    """The functionals a+, a-, c, d of a descending spectrum."""
    lam = np.asarray(lam, dtype=float)
    if N is None:
        N = lam.size
    if lam.size != N:
        raise DomainError(f"spectrum has {lam.size} entries, expected {N}")
    if np.any(np.diff(lam) > 0):
        raise NotSorted("spectrum must be sorted in descending order")
    ap = np.maximum(lam, 0.0) / N
    am = np.maximum(-lam[::-1], 0.0) / N
    if keep is not None:
        ap, am = ap[:keep], am[:keep]
    return SpectralSummary(ap, am, float(lam.sum() / N), float(np.sum(lam * lam) / N**2))


def point_configuration(obj):
    """Nonzero points (-a-_1, -a-_2, ..., a+_2, a+_1) of a summary or Omega point."""
    if isinstance(obj, OmegaPoint):
        ap, am = np.asarray(obj.alpha_plus), np.asarray(obj.alpha_minus)
    else:
        ap, am = np.asarray(obj.a_plus), np.asarray(obj.a_minus)
    pts = np.concatenate([-am[am > 0], ap[ap > 0]])
    return PointConfiguration(tuple(pts))


def summary_functional(a_plus, a_minus, F):
    """Sum of F(a+_i) + F(-a-_i); with F(x) = x^2 near 0 its N-limit picks up gamma_2."""
    ap = np.asarray(a_plus, dtype=float)
    am = np.asarray(a_minus, dtype=float)
    return float(np.sum(F(ap)) + np.sum(F(-am)))


def ergodic_fourier(omega, r, truncation=None):
    """Characteristic function of the ergodic measure at diag(r_1, ..., r_n)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    ap = np.asarray(omega.alpha_plus, dtype=float)
    am = np.asarray(omega.alpha_minus, dtype=float)
    K = max(ap.size, am.size) if truncation is None else int(truncation)
    rmax = float(np.max(np.abs(r))) if r.size else 0.0
    tail = (np.sum(ap[K:] ** 2) + np.sum(am[K:] ** 2)) * rmax**2
    if tail >= 1e-12:
        raise TruncationInsufficient(f"tail bound {tail:.2e} with {K} terms exceeds 1e-12")
    ap, am = ap[:K], am[:K]
    g2 = max(omega.gamma2, 0.0)
    logv = 0j
    for rj in r:
        logv += 1j * omega.gamma1 * rj - g2 * rj * rj
        z = ap * rj
        logv += np.sum(-1j * z - np.log1p(-1j * z))
        z = am * rj
        logv += np.sum(1j * z - np.log1p(1j * z))
    return complex(np.exp(logv))


# ---------------------------------------------------------------------------
# correlation estimation


def _as_rows(configs):
    if isinstance(configs, np.ndarray) and configs.ndim == 2:
        return configs
    rows = [c.as_array() if isinstance(c, PointConfiguration) else np.asarray(c, float) for c in configs]
    width = max((len(r) for r in rows), default=0)
    out = np.full((len(rows), width), np.nan)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


def _in(rows, iv):
    lo, hi = iv
    return (rows >= lo) & (rows <= hi)


def _intersect(*ivs):
    return (max(iv[0] for iv in ivs), min(iv[1] for iv in ivs))


def _ordered_tuples(rows, box):
    """Per-sample count of ordered k-tuples of distinct points, point i in box[i]."""
    k = len(box)
    n = [_in(rows, iv).sum(axis=1) for iv in box]
    if k == 1:
        return n[0]

    def cnt(*ivs):
        lo, hi = _intersect(*ivs)
        if lo > hi:
            return np.zeros(rows.shape[0])
        return _in(rows, (lo, hi)).sum(axis=1)

    if k == 2:
        return n[0] * n[1] - cnt(box[0], box[1])
    if k == 3:
        a, b, c = box
        return (
            n[0] * n[1] * n[2]
            - cnt(a, b) * n[2]
            - cnt(a, c) * n[1]
            - cnt(b, c) * n[0]
            + 2 * cnt(a, b, c)
        )
    raise DomainError("estimate_correlation supports k <= 3")


def _normalise_box(box, k):
    # a bare (lo, hi) pair is accepted for k = 1
    if k == 1 and np.ndim(box) == 1:
        box = (box,)
    return tuple((float(lo), float(hi)) for lo, hi in box)


def estimate_correlation(configs, boxes, k):
    """Mean number of ordered k-tuples of distinct particles per box, with stderr.

    ``configs`` is a list of configurations or a 2-D array with one sample per
    row (NaN padding allowed).  Each box is a sequence of k intervals.
    """
    if not 1 <= k <= 3:
        raise DomainError("k must be 1, 2 or 3")
    rows = _as_rows(configs)
    S = rows.shape[0]
    boxes = [_normalise_box(b, k) for b in boxes]
    for b in boxes:
        if len(b) != k:
            raise DomainError("each box must have exactly k intervals")
        for lo, hi in b:
            if lo > hi or (lo <= 0 <= hi):
                raise DomainError("box intervals must be compact subsets of the punctured line")
    per = np.array([_ordered_tuples(rows, b) for b in boxes], dtype=float)
    mean = per.mean(axis=1) if S else np.zeros(len(boxes))
    if S > 1:
        se = per.std(axis=1, ddof=1) / math.sqrt(S)
    else:
        se = np.zeros(len(boxes))
    return CorrelationEstimate(k, boxes, mean, S, se, per.sum(axis=1))


# ---------------------------------------------------------------------------
# gamma_2 diagnostic


def gamma2_closed_form(N, eps):
    """Integral of x^2 (N^2/pi) / (1 + N^2 x^2) over [-eps, eps]."""
    return (2.0 / math.pi) * (eps - math.atan(N * eps) / N)


def small_ball_moment(spectra, N, eps):
    """Per-sample sum of (lambda/N)^2 over |lambda/N| < eps."""
    x = np.asarray(spectra, dtype=float) / N
    return np.where(np.abs(x) < eps, x * x, 0.0).sum(axis=1)


def gamma2_diagnostic(samples, N_list, epsilon_list, s=None):
    """Uniform-integrability report for x^2 rho_1 near 0.

    ``samples`` maps each N to an array of spectra of shape (count, N).
    """
    rows = []
    for N in N_list:
        sp = np.asarray(samples[N])
        for eps in epsilon_list:
            v = small_ball_moment(sp, N, eps)
            row = {
                "N": int(N),
                "eps": float(eps),
                "mean": float(v.mean()),
                "stderr": float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0,
            }
            if s is not None and complex(s) == 0:
                row["closed_form"] = gamma2_closed_form(N, eps)
            rows.append(row)
    decreasing = True
    for N in N_list:
        vals = [r["mean"] for r in rows if r["N"] == N]
        order = np.argsort([-e for e in epsilon_list])
        vals = np.asarray(vals)[order]
        decreasing &= bool(np.all(np.diff(vals) <= 0))
    sup_by_eps = {
        float(e): max(r["mean"] for r in rows if r["eps"] == e) for e in epsilon_list
    }
    return {"rows": rows, "decreasing_in_eps": decreasing, "sup_over_N": sup_by_eps}


# ---------------------------------------------------------------------------
# graph of spectra


def cotransition_density(mu, lam):
    """(N-1)! times the Vandermonde ratio on the interlacing cone, zero outside it.

    The factorial makes the density in mu integrate to 1 over the cone.
    """
    mu = np.asarray(mu, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if lam.size != mu.size + 1:
        raise DomainError("need len(lambda) = len(mu) + 1")
    if np.any(np.diff(lam) > 0) or np.any(np.diff(mu) > 0):
        raise NotSorted("both spectra must be sorted in descending order")
    if np.any(-np.diff(lam) <= 1e-12):
        raise DegenerateSpectrum("lambda has coincident entries")
    if not (np.all(lam[:-1] >= mu) and np.all(mu >= lam[1:])):
        return 0.0
    num = 1.0
    for i, j in itertools.combinations(range(mu.size), 2):
        num *= mu[i] - mu[j]
    den = 1.0
    for i, j in itertools.combinations(range(lam.size), 2):
        den *= lam[i] - lam[j]
    return math.factorial(mu.size) * num / den


def regularity_trace(chain, N_list, keep=KEEP):
    """Spectral summaries of the corners of one matrix for each N in N_list."""
    M = chain.matrix if isinstance(chain, CornerChain) else np.asarray(chain)
    out = []
    for N in N_list:
        lam = np.linalg.eigvalsh(M[:N, :N])[::-1]
        out.append(spectral_summary(lam, N, keep))
    return out


def expected_box_counts(params, boxes, k, order=16):
    """Integrals of the scaled k-point correlation function over each box (k <= 2).

    This is the finite-N analytic counterpart of :func:`estimate_correlation`.
    """
    from scipy.special import roots_legendre

    from .pseudo_jacobi import EnsembleParams, cd_kernel_matrix, kernel_diagonal

    p = params if isinstance(params, EnsembleParams) else EnsembleParams(*params)
    N = p.N
    t, w = roots_legendre(order)

    def nodes(iv):
        lo, hi = iv
        h = 0.5 * (hi - lo)
        return lo + h * (t + 1), h * w

    out = []
    for box in (_normalise_box(b, k) for b in boxes):
        if k == 1:
            u, wu = nodes(box[0])
            out.append(float(np.dot(wu, N * kernel_diagonal(N * u, p))))
        elif k == 2:
            u, wu = nodes(box[0])
            v, wv = nodes(box[1])
            du = N * kernel_diagonal(N * u, p)
            dv = N * kernel_diagonal(N * v, p)
            kuv = N * cd_kernel_matrix(N * u, N * v, p)
            rho2 = du[:, None] * dv[None, :] - kuv * kuv
            out.append(float(wu @ rho2 @ wv))
        else:
            raise DomainError("analytic box integrals are provided for k <= 2")
    return np.array(out)
