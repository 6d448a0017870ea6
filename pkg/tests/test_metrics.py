import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_sketch.densela import random_orthogonal
from spectral_sketch.linop import DenseOperator
from spectral_sketch.metrics import (
    SpectrumSpec,
    assumption_report,
    cos2_theta,
    fit_power_law,
    hoelder_chain_check,
    kappa,
    kappa_prime,
    ra,
    rayleigh,
    rbar,
    xi_weights,
)
from spectral_sketch.sketch import bernoulli_sketch
from spectral_sketch.synth import spectrum


class TestRayleigh:
    def test_diag(self):
        op = DenseOperator(np.diag([4.0, 2, 1, 0]))
        assert rayleigh(op, [0.0, 1, 0, 0]) == 2.0
        assert rayleigh(op, [1.0, 1, 0, 0]) == 3.0

    def test_eigen_expansion(self):
        rng = np.random.default_rng(6)
        G = rng.standard_normal((6, 6))
        A = G + G.T
        v = rng.standard_normal(6)
        lam, U = np.linalg.eigh(A)
        assert rayleigh(DenseOperator(A), v) == pytest.approx(np.sum(lam * (U.T @ v) ** 2) / (v @ v), abs=1e-10)

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            rayleigh(DenseOperator(np.eye(2)), np.zeros(2))


class TestCos2:
    def test_basics(self):
        e1, e2 = np.eye(2)
        assert cos2_theta(e1, e1[:, None]) == 1.0
        assert cos2_theta(e1, e2[:, None]) == 0.0
        assert cos2_theta(np.array([1.0, 1.0]) / np.sqrt(2), e1) == pytest.approx(0.5)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(3, 30), st.integers(1, 3), st.integers(0, 2**32 - 1), st.floats(0.1, 100))
    def test_invariances(self, n, d, seed, scale):
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(n)
        S = rng.standard_normal((n, d))
        M = rng.standard_normal((d, d)) + 3 * np.eye(d)
        base = cos2_theta(v, S)
        assert cos2_theta(scale * v, S) == pytest.approx(base, abs=1e-10)
        assert cos2_theta(v, S @ M) == pytest.approx(base, abs=1e-9)
        assert 0.0 <= base <= 1.0 + 1e-12

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            cos2_theta(np.zeros(3), np.eye(3))


class TestKappa:
    def test_psd(self):
        assert kappa([1.0, 0.5, 0.25], 1) == 1.0

    def test_cancellation(self):
        assert kappa([1.0, 0.5, -0.5], 1) == pytest.approx(0.0)

    def test_zero_tail_convention(self):
        assert kappa([1.0, 0.0, 0.0], 2) == 1.0

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=30), st.floats(0.01, 100),
           st.integers(1, 4))
    def test_positive_rescaling(self, tail, c, q):
        vals = np.array([2.0] + tail)
        assert kappa(vals * c, q) == pytest.approx(kappa(vals, q), abs=1e-9)
        assert -1.0 - 1e-12 <= kappa(vals, q) <= 1.0 + 1e-12

    def test_needs_positive_top(self):
        with pytest.raises(ValueError):
            kappa([-1.0, -2.0], 1)

    def test_type3_type4_values(self):
        # literal evaluation of the family definitions at n = 10^4, i0 = 100, q = 1
        assert kappa(spectrum("type3", n=10_000, i0=100), 1) == pytest.approx(0.9742, abs=5e-4)
        assert kappa(spectrum("type4", n=10_000, i0=100), 1) == pytest.approx(0.2076, abs=5e-4)
        assert kappa(spectrum("type1", n=10_000, i0=100), 1) == 1.0


class TestKappaPrime:
    def test_ones_reduce_to_kappa(self):
        vals = [1.0, 0.7, -0.4, 0.2, -0.9]
        assert kappa_prime(vals, np.ones(5), 2) == kappa(vals, 2)

    def test_zeroed_negative(self):
        assert kappa_prime([1.0, 0.5, -0.5], [1.0, 1.0, 0.0], 1) == 1.0

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            kappa_prime([1.0, 0.5], [1.0], 1)
        with pytest.raises(ValueError):
            kappa_prime([1.0, 0.5], [1.0, -1.0], 1)

    def test_report(self):
        rep = assumption_report([1.0, 0.5, -0.5], 1, xi=[1.0, 1.0, 0.0])
        assert rep.kappa == pytest.approx(0.0)
        assert rep.kappa_prime == 1.0
        assert rep.spectrum_size == 3


class TestXi:
    def test_orthogonal_to_ones(self):
        u = np.array([1.0, -1.0, 0.0]) / np.sqrt(2)
        assert xi_weights(u, 0.3, 4)[0] == pytest.approx(0.3 * 0.7)

    def test_normalized_ones(self):
        n, p, d = 50, 0.4, 3
        # <u, 1>^2 = n for u = 1/sqrt(n)
        assert xi_weights(np.ones(n) / np.sqrt(n), p, d)[0] == pytest.approx(p * (1 - p + p * d * n))

    def test_arithmetic(self):
        u = np.array([1.0, 1.0]) / np.sqrt(2)  # <u,1>^2 = 2
        assert xi_weights(u, 0.5, 4)[0] == pytest.approx(2.25)

    def test_monte_carlo(self):
        n, p, d, trials = 12, 0.5, 3, 5000
        U = random_orthogonal(n, 2)
        xi = xi_weights(U, p, d)
        acc = np.zeros(n)
        for t in range(trials):
            S = bernoulli_sketch(n, d, p, t).data
            acc += (S.T @ U).sum(axis=0) ** 2 / d
        est = acc / trials
        np.testing.assert_allclose(est, xi, rtol=0.05)

    def test_bad_p(self):
        with pytest.raises(ValueError):
            xi_weights(np.ones(2), 0.0, 2)


class TestRatios:
    def test_psd_equal(self):
        rng = np.random.default_rng(0)
        vals = np.sort(rng.uniform(0, 1, 10))[::-1]
        w = rng.uniform(0, 1, 10)
        assert rbar(vals, w, 2) == ra(vals, w, 2)

    def test_plus_minus_one(self):
        assert rbar([1.0, -1.0], [1.0, 1.0], 1) == 1.0
        assert ra([1.0, -1.0], [1.0, 1.0], 1) == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_one_liner(self, seed):
        rng = np.random.default_rng(seed)
        vals = np.concatenate([[1.0], rng.uniform(-1, 1, 15)])
        w = rng.uniform(0, 2, 16)
        q = int(rng.integers(1, 4))
        a = vals / vals[0]
        assert rbar(vals, w, q) == pytest.approx((np.abs(a) ** (2 * q + 1) @ w) / (a ** (2 * q) @ w))

    def test_chain_monotone_psd(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a = rng.uniform(0, 1, 20)
            w = rng.exponential(1, 20)
            f = [np.sum(a ** (k + 1) * w) / np.sum(a ** k * w) for k in range(12)]
            assert np.all(np.diff(f) >= -1e-12)

    def test_negative_projection(self):
        with pytest.raises(ValueError):
            rbar([1.0, 0.5], [1.0, -0.1], 1)


class TestHoelder:
    def test_equality(self):
        for q in (1, 2, 5):
            assert hoelder_chain_check([1.0, 1.0], [1.0, 1.0], q)

    def test_simple(self):
        assert hoelder_chain_check([1.0, 0.0], [1.0, 1.0], 1)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10)), min_size=1, max_size=20), st.integers(1, 6))
    def test_property(self, pairs, q):
        a = np.array([p[0] for p in pairs])
        w = np.array([p[1] for p in pairs])
        if not np.any(a * w > 1e-6):
            return
        assert hoelder_chain_check(a, w, q)

    def test_degenerate(self):
        with pytest.raises(ValueError):
            hoelder_chain_check([0.0, 0.0], [1.0, 1.0], 1)


class TestPowerLaw:
    def test_exact_inverse(self):
        fit = fit_power_law(1.0 / np.arange(1, 1001))
        assert 0.95 <= fit.gamma <= 1.05
        assert fit.i0 <= 5
        assert not fit.poor

    def test_flat(self):
        fit = fit_power_law(np.ones(200))
        assert fit.poor
        assert fit.gamma < 0.05
        assert fit.ks_distance >= 0.5

    def test_type1(self):
        fit = fit_power_law(spectrum("type1", n=2000, i0=100).magnitudes)
        assert 50 <= fit.i0 <= 200
        assert 0.9 <= fit.gamma <= 1.1

    @pytest.mark.parametrize("gamma", [0.5, 2.0])
    def test_envelope_holds(self, gamma):
        s = np.arange(1, 501, dtype=float) ** -gamma * (1 + 0.05 * np.random.default_rng(1).random(500))
        s = np.sort(s)[::-1]
        fit = fit_power_law(s)
        i = np.arange(fit.i0, 501)
        assert np.all(s[fit.i0 - 1:] / s[0] <= fit.C * i ** -fit.gamma * (1 + 1e-12))
        assert fit.gamma == pytest.approx(gamma, rel=0.15)

    def test_bad_input(self):
        with pytest.raises(ValueError):
            fit_power_law(np.arange(1, 20, dtype=float))
        with pytest.raises(ValueError):
            fit_power_law(np.ones(5))
        with pytest.raises(ValueError):
            fit_power_law(np.r_[np.ones(20), 0.0])


class TestSpectrumSpec:
    def test_properties(self):
        s = SpectrumSpec([1.0, -2.0, 0.5])
        assert s.n == 3 and s.lambda1 == 1.0 and not s.is_psd
        np.testing.assert_array_equal(s.magnitudes, [2.0, 1.0, 0.5])

    def test_invalid(self):
        with pytest.raises(ValueError):
            SpectrumSpec([])
        with pytest.raises(ValueError):
            SpectrumSpec([1.0, np.nan])
