"""Quick invariant checks run by ``huapickrell selftest``."""
import cmath
import math

import numpy as np

from . import ergodic, hua_pickrell as hp, limit_kernel as lk, pseudo_jacobi as pj, specialfns as sf


def _kummer_transform():
    a, c, z = 0.7 + 0.3j, 2.1, -9.0 + 4.0j
    lhs = sf.kummer_1f1(a, c, z)
    rhs = cmath.exp(z) * sf.kummer_1f1(c - a, c, -z)
    return abs(lhs - rhs) <= 1e-11 * abs(lhs)


def _log_gamma_recursion():
    z = 2.3 + 1.7j
    d = sf.log_gamma_complex(z + 1) - sf.log_gamma_complex(z) - cmath.log(z)
    k = round(d.imag / (2 * math.pi))
    return abs(d - 2j * math.pi * k) <= 1e-12


def _contiguous():
    m, b, c, z = 6, 0.4 + 0.2j, 1.3 - 0.5j, 0.6 - 0.3j
    r = (sf.gauss_2f1_terminating(m, b, c, z) - sf.gauss_2f1_terminating(m, b, c + 1, z)
         - (-m) * b * z / (c * (c + 1)) * sf.gauss_2f1_terminating(m - 1, b + 1, c + 2, z))
    return abs(r) <= 1e-12 * abs(sf.gauss_2f1_terminating(m, b, c, z))


def _reflection():
    p = pj.EnsembleParams(0.4 + 0.9j, 6)
    v1 = pj.poly_p(4, -1.3, p).value
    v2 = pj.poly_p(4, 1.3, p.conj()).value
    return abs(v1 - v2) <= 1e-12 * abs(v1)


def _density_eq():
    p = pj.EnsembleParams(0, 20)
    x = np.linspace(-10, 10, 41)
    ref = 20 / (math.pi * (1 + x * x))
    return float(np.max(np.abs(pj.kernel_diagonal(x, p) / ref - 1))) <= 1e-10


def _kernel_psd():
    p = pj.EnsembleParams(1 + 0.7j, 8)
    x = np.array([-2.0, -0.4, 0.1, 0.9, 3.0])
    M = pj.cd_kernel_matrix(x, x, p)
    return float(np.linalg.eigvalsh(0.5 * (M + M.T)).min()) >= -1e-9


def _sine_degeneration():
    xs = np.linspace(0.15, 3.0, 20)
    worst = max(abs(lk.kernel_inf(a, b, 0) - lk.sine_kernel_form(a, b)) for a in xs for b in xs)
    return worst <= 1e-12


def _bessel_route():
    return all(
        abs(lk.fn_P(x, s) - lk.fn_P_bessel(x, s)) <= 1e-10 * max(1, abs(lk.fn_P(x, s)))
        for s in (0.1, 0.5, 2.0) for x in (0.3, -0.8, 2.5)
    )


def _fredholm():
    d1 = lk.fredholm_det(0.5, (0.5, math.inf), 30)
    d2 = lk.fredholm_det(0.5, (0.5, math.inf), 60)
    return 0 < d1 <= 1 and abs(d1 - d2) <= 1e-8


def _hellinger():
    return hp.hellinger_affinity(0.3 + 0.2j, 0.3 + 0.2j, 10) == 1.0


def _block_det():
    rng = np.random.default_rng(5)
    A = np.eye(5) + 0.2 * (rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    return hp.block_det_identity_check(A, 0.6 + 0.4j, 2) <= 1e-10


def _interlacing():
    chain = hp.sample_spectra(8, 0.3 + 0.5j, hp.make_rng(11), 200, keep_all=True)
    ok = True
    for n in range(1, 8):
        for mu, lam in zip(chain[n - 1], chain[n]):
            ok &= hp.interlaces(mu[::-1], lam[::-1])
    return ok


def _summary_identity():
    lam = np.sort(np.random.default_rng(3).standard_normal(12))[::-1]
    sm = ergodic.spectral_summary(lam, 12)
    return abs(sm.d - np.sum(sm.a_plus**2) - np.sum(sm.a_minus**2)) <= 1e-12


def _fourier_bound():
    om = ergodic.OmegaPoint((0.6, 0.2), (0.4,), 0.3, 1.0)
    v = ergodic.ergodic_fourier(om, [0.5, -1.2, 2.0])
    return abs(v) <= 1 and ergodic.ergodic_fourier(om, [0.0, 0.0]) == 1


CHECKS = [
    ("kummer transform consistency", _kummer_transform),
    ("log-gamma recursion", _log_gamma_recursion),
    ("2F1 contiguous relation", _contiguous),
    ("polynomial reflection symmetry", _reflection),
    ("s=0 one-point density", _density_eq),
    ("finite-N kernel positive semidefinite", _kernel_psd),
    ("sine degeneration of the limit kernel", _sine_degeneration),
    ("Bessel route for real s", _bessel_route),
    ("Fredholm determinant self-convergence", _fredholm),
    ("Hellinger affinity identity", _hellinger),
    ("block determinant identity", _block_det),
    ("corner interlacing", _interlacing),
    ("spectral summary identity", _summary_identity),
    ("ergodic Fourier transform bound", _fourier_bound),
]


def run_checks():
    results = []
    for name, fn in CHECKS:
        try:
            ok = bool(fn())
        except Exception as exc:  # report, keep going
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        results.append((name, ok))
    return results
