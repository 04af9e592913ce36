import itertools
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from huapickrell import ergodic as eg, hua_pickrell as hp
from huapickrell.configuration import PointConfiguration
from huapickrell.errors import DegenerateSpectrum, DomainError, NotSorted, TruncationInsufficient
from huapickrell.pseudo_jacobi import EnsembleParams

nonzero = st.floats(-50, 50).filter(lambda v: abs(v) > 1e-6)


class TestSummary:
    def test_small_example(self):
        sm = eg.spectral_summary(np.array([2.0, -1.0]), 2)
        assert sm.a_plus[0] == 1.0 and sm.a_minus[0] == 0.5
        assert sm.c == 0.5 and sm.d == 1.25

    def test_zero(self):
        sm = eg.spectral_summary(np.zeros(5), 5)
        assert not sm.a_plus.any() and not sm.a_minus.any() and sm.c == 0 and sm.d == 0

    def test_unsorted(self):
        with pytest.raises(NotSorted):
            eg.spectral_summary(np.array([-1.0, 2.0]), 2)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=64))
    def test_d_identity(self, vals):
        lam = np.sort(vals)[::-1]
        sm = eg.spectral_summary(lam, lam.size)
        assert sm.d == pytest.approx(np.sum(sm.a_plus**2) + np.sum(sm.a_minus**2), rel=1e-12, abs=1e-300)

    def test_c_self_consistent(self, s0_spectra):
        sp = s0_spectra(50, 10_000, 101)
        cs = np.array([eg.spectral_summary(lam[::-1], 50).c for lam in sp[:500]])
        assert cs.mean() == pytest.approx(np.mean(sp[:500].sum(axis=1) / 50), rel=1e-12)


class TestConfigurations:
    def test_example(self):
        sm = eg.spectral_summary(np.array([2.0, 0.0, -1.0]), 3)
        cfg = eg.point_configuration(sm)
        assert cfg.points == pytest.approx((-1 / 3, 2 / 3))

    def test_omega(self):
        om = eg.OmegaPoint((1.0, 0.0), (0.5, 0.0), 0.0, 1.25)
        assert eg.point_configuration(om).points == (-0.5, 1.0)

    def test_empty(self):
        assert len(eg.point_configuration(eg.spectral_summary(np.zeros(3), 3))) == 0

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=40))
    def test_nonzero_multiset_preserved(self, vals):
        lam = np.sort(vals)[::-1]
        cfg = eg.point_configuration(eg.spectral_summary(lam, lam.size))
        expect = np.sort(lam[lam != 0] / lam.size)
        assert np.array_equal(np.sort(cfg.as_array()), expect)

    def test_configuration_rejects_zero(self):
        with pytest.raises(DomainError):
            PointConfiguration((0.0, 1.0))


class TestOmega:
    def test_gamma2(self):
        om = eg.OmegaPoint((0.6,), (0.2,), 0.1, 1.0)
        assert om.gamma2 == pytest.approx(1.0 - 0.36 - 0.04)

    def test_delta_too_small(self):
        with pytest.raises(DomainError):
            eg.OmegaPoint((1.0,), (), 0.0, 0.5)

    def test_fourier_zero(self):
        assert eg.ergodic_fourier(eg.OmegaPoint((0.7,), (0.2,), 1.3, 2.0), [0.0, 0.0, 0.0]) == 1

    def test_fourier_gaussian(self):
        om = eg.OmegaPoint((), (), 0.0, 0.8)
        r = [0.4, -1.1]
        assert eg.ergodic_fourier(om, r) == pytest.approx(math.exp(-0.8 * (0.16 + 1.21)), rel=1e-14)

    def test_fourier_single_alpha(self):
        a = 0.9
        om = eg.OmegaPoint((a,), (), 0.0, a * a)
        r = np.array([0.5, 2.0, -1.5])
        assert abs(eg.ergodic_fourier(om, r)) == pytest.approx(np.prod(1 / np.sqrt(1 + a * a * r * r)), rel=1e-13)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(0, 2), max_size=6), st.lists(st.floats(0, 2), max_size=6),
           st.floats(-3, 3), st.floats(0, 3), st.lists(st.floats(-5, 5), min_size=1, max_size=5))
    def test_fourier_bounded(self, ap, am, g1, extra, r):
        om = eg.OmegaPoint(tuple(ap), tuple(am), g1, sum(v * v for v in ap + am) + extra)
        assert abs(eg.ergodic_fourier(om, r)) <= 1 + 1e-12

    def test_truncation(self):
        om = eg.OmegaPoint((0.5, 0.4, 0.3), (), 0.0, 1.0)
        with pytest.raises(TruncationInsufficient):
            eg.ergodic_fourier(om, [1.0], truncation=1)


class TestLimitInterchange:
    """Sum of F over the summary tends to the same sum over the limit plus gamma_2."""

    @staticmethod
    def F(x, eps=0.2):
        return np.minimum(x * x, eps * eps)

    def build(self, N, leak):
        alpha_p = np.array([0.9, 0.5, 0.1])
        alpha_m = np.array([0.7, 0.05])
        ap = np.concatenate([alpha_p + 1.0 / N, np.full(N, math.sqrt(leak / N))])
        am = alpha_m + 0.5 / N
        return ap, am, alpha_p, alpha_m

    @pytest.mark.parametrize("leak", [0.0, 0.3, 1.7])
    def test_leak_recovered(self, leak):
        vals = []
        for N in (10**3, 10**4, 10**5):
            ap, am, alpha_p, alpha_m = self.build(N, leak)
            vals.append(eg.summary_functional(ap, am, self.F))
        limit = eg.summary_functional(alpha_p, alpha_m, self.F) + leak
        errs = [abs(v - limit) for v in vals]
        assert errs[-1] < 1e-4
        assert errs[0] >= errs[1] >= errs[2]

    def test_delta_consistent(self):
        ap, am, alpha_p, alpha_m = self.build(10**6, 0.3)
        delta = np.sum(ap**2) + np.sum(am**2)
        gamma2 = delta - np.sum(alpha_p**2) - np.sum(alpha_m**2)
        assert gamma2 == pytest.approx(0.3, abs=1e-5)


class TestCorrelationEstimates:
    def test_single_point(self):
        est = eg.estimate_correlation([PointConfiguration((0.5,))], [((0.4, 0.6),)], 1)
        assert est.counts[0] == 1 and est.stderr[0] == 0

    def test_pairs_need_two_particles(self):
        est = eg.estimate_correlation([PointConfiguration((0.5,))], [((0.4, 0.6), (0.4, 0.6))], 2)
        assert est.counts[0] == 0

    def test_box_must_avoid_zero(self):
        with pytest.raises(DomainError):
            eg.estimate_correlation([PointConfiguration((0.5,))], [((-0.1, 0.6),)], 1)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(nonzero, max_size=8), min_size=1, max_size=6), st.data())
    def test_inclusion_exclusion_brute_force(self, samples, data):
        edges = sorted(data.draw(st.lists(st.floats(0.5, 40), min_size=4, max_size=4, unique=True)))
        ivs = [(edges[0], edges[2]), (edges[1], edges[3]), (-edges[3], -edges[0])]
        for k in (2, 3):
            box = tuple(data.draw(st.sampled_from(ivs)) for _ in range(k))
            est = eg.estimate_correlation(samples, [box], k)
            brute = []
            for pts in samples:
                n = 0
                for idx in itertools.permutations(range(len(pts)), k):
                    n += all(box[j][0] <= pts[i] <= box[j][1] for j, i in enumerate(idx))
                brute.append(n)
            assert est.counts[0] == pytest.approx(np.mean(brute), abs=1e-12)

    def test_partition_sums_to_total(self, s0_spectra):
        x = s0_spectra(50, 10_000, 101) / 50
        cuts = np.linspace(0.1, 1.0, 7)
        parts = [((a, b),) for a, b in zip(cuts[:-1], cuts[1:])]
        est = eg.estimate_correlation(x, parts, 1)
        total = np.mean(np.sum((x >= 0.1) & (x <= 1.0), axis=1))
        assert est.counts.sum() == pytest.approx(total, rel=1e-12)

    def test_one_point_against_kernel(self, s0_spectra):
        x = s0_spectra(50, 10_000, 101) / 50
        cuts = [0.1, 0.15, 0.25, 0.4, 0.6, 1.0]
        boxes = [((a, b),) for a, b in zip(cuts[:-1], cuts[1:])]
        est = eg.estimate_correlation(x, boxes, 1)
        exact = eg.expected_box_counts(EnsembleParams(0, 50), boxes, 1)
        assert np.all(np.abs(est.counts - exact) <= 3 * est.stderr)

    def test_expected_counts_closed_form(self):
        N, (a, b) = 50, (0.1, 0.4)
        v = eg.expected_box_counts(EnsembleParams(0, N), [((a, b),)], 1)[0]
        ref = N / math.pi * (math.atan(N * b) - math.atan(N * a))
        assert v == pytest.approx(ref, rel=1e-12)


class TestTraceBound:
    def test_trace_bounded_in_N(self):
        A = [((0.1, 1.0),), ((-2.0, -0.2),)]
        p = 0.4 + 0.6j
        traces = np.array([eg.expected_box_counts(EnsembleParams(p, N), A, 1) for N in (10, 40, 160, 500)])
        assert np.all(traces < 5.0)
        assert np.all(np.ptp(traces[1:], axis=0) < 0.1 * traces[-1])

    @pytest.mark.parametrize("N", [10, 80])
    def test_factorial_moment_bound(self, N):
        A = (0.2, 0.9)
        p = EnsembleParams(1 + 0.7j, N)
        tr = eg.expected_box_counts(p, [(A,)], 1)[0]
        second = eg.expected_box_counts(p, [(A, A)], 2)[0]
        assert 0 <= second <= tr * tr


class TestGamma2:
    def test_closed_form_value(self):
        assert eg.gamma2_closed_form(50, 0.1) == pytest.approx((2 / math.pi) * (0.1 - math.atan(5) / 50), rel=1e-15)

    def test_small_eps(self):
        assert eg.gamma2_closed_form(50, 1e-9) < 1e-20

    def test_monte_carlo(self, s0_spectra):
        sp = s0_spectra(50, 10_000, 101)
        rep = eg.gamma2_diagnostic({50: sp}, [50], [0.2, 0.1, 0.05], 0.0)
        for row in rep["rows"]:
            assert abs(row["mean"] - row["closed_form"]) <= 3 * row["stderr"]
        assert rep["decreasing_in_eps"]


class TestGraphOfSpectra:
    def test_two_point(self):
        assert eg.cotransition_density(np.array([0.0]), np.array([1.0, -1.0])) == 0.5

    def test_outside(self):
        assert eg.cotransition_density(np.array([2.0]), np.array([1.0, -1.0])) == 0.0

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrum):
            eg.cotransition_density(np.array([1.0]), np.array([1.0, 1.0]))

    def test_normalised(self):
        lam = np.array([2.0, 0.5, -1.0, -3.0])
        rng = np.random.default_rng(23)
        # uniform draws on the box [lam_2, lam_1] x [lam_3, lam_2] x [lam_4, lam_3]
        u = rng.uniform([0.5, -1.0, -3.0], [2.0, 0.5, -1.0], size=(20_000, 3))
        vol = 1.5 * 1.5 * 2.0
        vals = np.array([eg.cotransition_density(m, lam) for m in u])
        est = vol * vals.mean()
        assert est == pytest.approx(1.0, abs=4 * vol * vals.std() / math.sqrt(vals.size))

    def test_positive_on_sampled_corners(self):
        rng = hp.make_rng(24)
        for _ in range(30):
            X = hp.sample_matrix(6, 0.3, rng)
            lam = np.linalg.eigvalsh(X)[::-1]
            mu = np.linalg.eigvalsh(X[:5, :5])[::-1]
            assert eg.cotransition_density(mu, lam) > 0


class TestRegularityTrace:
    def test_diagonal_chain(self):
        # the N-corner of diag(1, 2, 3, ...) has top eigenvalue N
        chain = eg.CornerChain(np.diag(np.arange(1.0, 31.0)))
        for sm in eg.regularity_trace(chain, [1, 5, 17, 30]):
            assert sm.a_plus[0] == 1.0

    def test_zero_chain(self):
        for sm in eg.regularity_trace(eg.CornerChain(np.zeros((10, 10))), [2, 5, 10]):
            assert sm.c == 0 and sm.d == 0 and not sm.a_plus.any()

    def test_stabilisation_report(self):
        X = hp.sample_matrix(200, 0.0, hp.make_rng(25))
        trace = eg.regularity_trace(eg.CornerChain(X), [50, 100, 200])
        top = np.array([[t.a_plus[0], t.a_minus[0]] for t in trace])
        assert np.all(np.isfinite(top)) and np.all(top >= 0)
