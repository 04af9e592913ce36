import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from huapickrell import hua_pickrell as hp
from huapickrell.errors import DomainError, EigenFailure, NotInHalfplane

# Hellinger affinities at N = 3 by one-dimensional mpmath quadrature of sqrt(mu' mu'')
AFFINITY_N3 = {(0.3 + 0.2j, 1.1 - 0.5j): 0.935255156121766385, (0.0, 1.0): 0.940934648186525098}


def chi2_pvalue(draws, cdf, edges):
    counts = np.histogram(draws, bins=edges)[0]
    probs = np.diff([cdf(e) for e in edges])
    expected = probs * draws.size
    keep = expected > 5
    chi2 = np.sum((counts[keep] - expected[keep]) ** 2 / expected[keep])
    return stats.chi2.sf(chi2, keep.sum() - 1)


def haar_unitary(n, rng):
    return stats.unitary_group.rvs(n, random_state=rng)


class TestRng:
    def test_reproducible(self):
        a = hp.sample_spectra(6, 0.3 + 0.4j, hp.make_rng(99), 50)
        b = hp.sample_spectra(6, 0.3 + 0.4j, hp.make_rng(99), 50)
        assert np.array_equal(a, b)

    def test_matrices_reproducible(self):
        assert np.array_equal(hp.sample_matrix(5, 1.0, hp.make_rng(3)), hp.sample_matrix(5, 1.0, hp.make_rng(3)))


class TestOneDimensional:
    def test_cauchy(self):
        n = 100_000
        t = hp.sample_mu1(0.0, hp.make_rng(1), n)
        d = stats.kstest(t, stats.cauchy.cdf).statistic
        assert d < 1.63 / math.sqrt(n)

    def test_real_s_symmetric(self):
        t = hp.sample_mu1(0.7, hp.make_rng(2), 100_000)
        m = np.mean(np.sign(t))
        assert abs(m) < 3 / math.sqrt(t.size)

    @pytest.mark.parametrize("s", [0.0, 1 + 1j, -0.3 - 0.8j])
    def test_mu1_density_normalised(self, s):
        total = quad(lambda t: float(hp.mu1_density(t, s)), -np.inf, np.inf, epsrel=1e-12)[0]
        assert total == pytest.approx(1.0, rel=1e-9)

    def test_mu1_chi2_complex_s(self):
        s = 1 + 1j
        t = hp.sample_mu1(s, hp.make_rng(3), 100_000)
        edges = np.concatenate([[-np.inf], np.linspace(-4, 6, 41), [np.inf]])

        def cdf(x):
            if x == -np.inf:
                return 0.0
            if x == np.inf:
                return 1.0
            return quad(lambda u: float(hp.mu1_density(u, s)), -np.inf, x, epsrel=1e-11)[0]

        assert chi2_pvalue(t, cdf, edges) > 0.01

    def test_r_mean_N2(self):
        r = hp.sample_r(2, 0.0, hp.make_rng(4), 100_000)
        v = 1 / (1 + r)
        assert abs(v.mean() - 2 / 3) < 3 * v.std() / math.sqrt(v.size)

    @pytest.mark.parametrize("N, s", [(2, 0.0), (5, 0.4 + 1j), (12, -0.2)])
    def test_r_density_normalised(self, N, s):
        total = quad(lambda r: float(hp.r_density(r, N, s)), 0, np.inf, epsrel=1e-12)[0]
        assert total == pytest.approx(1.0, rel=1e-9)

    def test_r_chi2(self):
        N, s = 4, 0.6 - 0.5j
        r = hp.sample_r(N, s, hp.make_rng(5), 50_000)
        edges = np.concatenate([np.linspace(0, 3, 31), [np.inf]])

        def cdf(x):
            if x == np.inf:
                return 1.0
            return quad(lambda u: float(hp.r_density(u, N, s)), 0, x, epsrel=1e-11)[0]

        assert chi2_pvalue(r, cdf, edges) > 0.01

    def test_zeta_right_half_plane(self):
        z = hp.sample_muN(7, 0.2 + 0.3j, hp.make_rng(6), 10_000)
        assert np.all(z.real > 0)

    def test_bad_s(self):
        with pytest.raises(DomainError):
            hp.sample_mu1(-0.5, hp.make_rng(0))


class TestMatrices:
    def test_N1(self):
        X = hp.sample_matrix(1, 0.5, hp.make_rng(7))
        assert X.shape == (1, 1) and X[0, 0].imag == 0

    def test_hermitian(self):
        X = hp.sample_matrices(6, 0.4 - 0.9j, hp.make_rng(8), 20)
        assert np.allclose(X, np.conj(np.transpose(X, (0, 2, 1))))

    def test_N2_corner_is_mu1(self):
        X = hp.sample_matrices(2, 0.0, hp.make_rng(9), 20_000)
        t = hp.sample_mu1(0.0, hp.make_rng(10), 20_000)
        assert stats.ks_2samp(X[:, 0, 0].real, t).pvalue > 0.01

    def test_unitary_invariance(self):
        rng = hp.make_rng(11)
        n = 3
        X = hp.sample_matrices(n, 0.5 + 0.5j, rng, 20_000)
        U = np.array([haar_unitary(n, rng) for _ in range(20_000)])
        Y = U @ X @ np.conj(np.transpose(U, (0, 2, 1)))
        for i in range(n):
            assert stats.ks_2samp(X[:, i, i].real, Y[:, i, i].real).pvalue > 0.01

    def test_arrowhead_chain_matches_matrices(self):
        a = np.linalg.eigvalsh(hp.sample_matrices(6, 0.3 + 0.6j, hp.make_rng(12), 10_000))
        b = hp.sample_spectra(6, 0.3 + 0.6j, hp.make_rng(13), 10_000)
        assert stats.ks_2samp(a[:, -1], b[:, -1]).pvalue > 0.01
        assert stats.ks_2samp(a.sum(axis=1), b.sum(axis=1)).pvalue > 0.01

    def test_corner_marginal_2_of_5(self):
        rng = hp.make_rng(14)
        X = hp.sample_matrices(5, 0.2, rng, 10_000)
        U = np.array([haar_unitary(5, rng) for _ in range(10_000)])
        Y = (U @ X @ np.conj(np.transpose(U, (0, 2, 1))))[:, :2, :2]
        a = np.linalg.eigvalsh(Y)
        b = hp.sample_spectra(2, 0.2, hp.make_rng(15), 10_000)
        assert stats.ks_2samp(a[:, 1], b[:, 1]).pvalue > 0.01

    def test_interlacing(self):
        rng = hp.make_rng(16)
        for _ in range(50):
            X = hp.sample_matrix(8, 0.1 - 0.4j, rng)
            for n in range(2, 9):
                lam = np.linalg.eigvalsh(X[:n, :n])[::-1]
                mu = np.linalg.eigvalsh(X[: n - 1, : n - 1])[::-1]
                assert hp.interlaces(mu, lam)

    def test_interlaces_detects_violation(self):
        assert not hp.interlaces(np.array([3.0]), np.array([2.0, 1.0]))

    def test_size_cap(self):
        with pytest.raises(DomainError):
            hp.sample_matrix(hp.N_CAP + 1, 0, hp.make_rng(0))

    def test_eigen_failure(self, monkeypatch):
        monkeypatch.setattr(np.linalg, "eigh", lambda Y: (np.zeros(Y.shape[0]), np.eye(Y.shape[0]) * 2))
        with pytest.raises(EigenFailure):
            hp.extend_corner(np.eye(2, dtype=complex), 0.0, hp.make_rng(0))

    def test_zeta_chain_marginals(self):
        rng = hp.make_rng(17)
        X = hp.sample_matrices(4, 0.3 - 0.2j, rng, 10_000)
        z = np.array([hp.zeta_chain(x).zetas[-1] for x in X])
        r = hp.sample_r(4, 0.3 - 0.2j, hp.make_rng(18), 10_000)
        assert np.all(z.real > 0)
        assert stats.ks_2samp(z.real, r).pvalue > 0.01


class TestDensity:
    def test_N1(self):
        assert hp.density_msN(np.zeros((1, 1)), 0.0) == pytest.approx(1 / math.pi, rel=1e-14)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(19)
        X = hp.sample_matrix(4, 0.5 + 0.2j, hp.make_rng(19))
        U = haar_unitary(4, rng)
        a = hp.density_msN(X, 0.5 + 0.2j)
        b = hp.density_msN(U @ X @ U.conj().T, 0.5 + 0.2j)
        assert a == pytest.approx(b, rel=1e-11)

    def test_normalisation_importance_sampling(self):
        # draws at s = 0 reweighted to s = 0.3
        X = hp.sample_matrices(2, 0.0, hp.make_rng(20), 20_000)
        w = np.array([math.exp(hp.log_density_msN(x, 0.3) - hp.log_density_msN(x, 0.0)) for x in X])
        assert abs(w.mean() - 1) < 3 * w.std() / math.sqrt(w.size)


class TestHellinger:
    def test_identity(self):
        assert hp.hellinger_affinity(0.4 - 0.1j, 0.4 - 0.1j, 17) == 1.0

    @pytest.mark.parametrize("pair", list(AFFINITY_N3))
    def test_quadrature_reference(self, pair):
        assert hp.hellinger_affinity(*pair, 3) == pytest.approx(AFFINITY_N3[pair], abs=1e-6)

    @pytest.mark.parametrize("s1, s2", [(0, 1), (0.2 + 0.5j, 1 - 0.3j), (-0.3 + 0.2j, 0.4 + 1.1j)])
    def test_limit(self, s1, s2):
        target = abs(s1 - s2) ** 2 / 4
        assert hp.hellinger_limit_estimate(s1, s2) == pytest.approx(target, rel=0.02)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(-0.45, 2), st.floats(-2, 2), st.floats(-0.45, 2), st.floats(-2, 2), st.integers(2, 300))
    def test_bounded_and_symmetric(self, a1, b1, a2, b2, N):
        s1, s2 = complex(a1, b1), complex(a2, b2)
        v = hp.hellinger_affinity(s1, s2, N)
        assert 0 <= v <= 1
        assert v == pytest.approx(hp.hellinger_affinity(s2, s1, N), rel=1e-13)

    def test_slope_swap(self):
        a = hp.kakutani_divergence_report(0, 1, 2000)["slope"]
        b = hp.kakutani_divergence_report(1, 0, 2000)["slope"]
        assert a == b

    def test_equal_parameters_product(self):
        rep = hp.kakutani_divergence_report(0.5, 0.5, 100)
        assert np.all(rep["partial_products"] == 1)


class TestBlockDeterminant:
    def test_z1(self):
        rng = np.random.default_rng(21)
        A = np.eye(5) + 0.3 * (rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
        assert hp.block_det_identity_check(A, 1, 2) <= 1e-13

    def test_identity(self):
        assert hp.block_det_identity_check(np.eye(4), 0.3 - 2j, 1) == 0.0

    def test_near_identity(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            n = rng.integers(2, 7)
            A = np.eye(n) + 0.2 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
            assert hp.block_det_identity_check(A, 0.5 + 0.5j, rng.integers(1, n)) <= 1e-10

    def test_outside_halfplane(self):
        with pytest.raises(NotInHalfplane):
            hp.block_det_identity_check(-np.eye(3), 0.5, 1)
