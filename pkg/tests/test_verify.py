import json

import numpy as np
import pytest

from spectral_sketch import verify
from spectral_sketch.graph import from_edges
from spectral_sketch.metrics import SpectrumSpec
from spectral_sketch.synth import spectrum


class TestCos2Campaign:
    def test_gaussian_mean(self):
        r = verify.empirical_cos2(1000, 10, "gaussian", "e1", trials=500, seed=1)
        assert 0.009 <= r.mean <= 0.011
        assert r.verdict

    def test_full_range(self):
        r = verify.empirical_cos2(20, 20, "gaussian", "uniform_unit", trials=50, seed=0)
        assert r.mean == pytest.approx(1.0) and r.q05 == pytest.approx(1.0)

    def test_bernoulli_ones(self):
        r = verify.empirical_cos2(1000, 4, "bernoulli", "ones_normalized", trials=500, seed=2)
        assert r.q05 >= 0.2 and r.verdict

    def test_bernoulli_orthogonal(self):
        r = verify.empirical_cos2(1000, 4, "bernoulli", "orthogonal_to_ones", trials=200, seed=2)
        assert r.verdict

    def test_reproducible(self):
        a = verify.empirical_cos2(100, 3, trials=40, seed=9, keep_samples=True)
        b = verify.empirical_cos2(100, 3, trials=40, seed=9, keep_samples=True)
        assert a == b

    def test_too_few_trials(self):
        with pytest.raises(ValueError):
            verify.empirical_cos2(100, 3, trials=5)

    @pytest.mark.parametrize("kw", [dict(dist="cauchy"), dict(v_spec="e2"), dict(n=3, d=4)])
    def test_bad_args(self, kw):
        args = dict(n=50, d=3, trials=40)
        args.update(kw)
        with pytest.raises(ValueError):
            verify.empirical_cos2(**args)


class TestPathwise:
    @pytest.mark.parametrize("q", [1, 3])
    def test_small(self, q):
        assert verify.check_psd_pathwise(SpectrumSpec([4.0, 2, 1, 0]), q=q, d=2, trials=200, seed=0).verdict

    def test_rank_one(self):
        r = verify.check_psd_pathwise(SpectrumSpec([1.0, 0, 0, 0, 0]), q=1, d=1, trials=50, seed=0)
        assert r.verdict and r.q05 >= 0

    def test_rejects_signed(self):
        with pytest.raises(ValueError):
            verify.check_psd_pathwise(SpectrumSpec([1.0, -1.0]), 1, 1)


class TestTightness:
    def test_q3(self):
        r = verify.check_tightness(2000, 5, 3, trials=100, seed=0)
        assert r.target == pytest.approx(0.0025 ** (1 / 7))
        assert r.target == pytest.approx(0.4249, abs=1e-4)
        assert r.verdict

    def test_full_range(self):
        r = verify.check_tightness(8, 8, 1, trials=30, seed=0)
        assert r.median == pytest.approx(1.0) and r.q05 == pytest.approx(1.0)

    def test_needs_room(self):
        with pytest.raises(ValueError):
            verify.check_tightness(10, 5, 1)


class TestPowerLawTheorem:
    def test_type1_d1(self):
        spec = spectrum("type1", n=2000, i0=100)
        r = verify.check_powerlaw_theorem(spec, 100, q=1, d=1, trials=100, seed=0)
        assert r.target == pytest.approx(0.1 * (1 / 101) ** (1 / 3))
        assert r.verdict

    def test_threshold_at_d_equal_i0(self):
        spec = spectrum("type1", n=300, i0=20)
        r = verify.check_powerlaw_theorem(spec, 20, q=2, d=20, trials=30, seed=0)
        assert r.target == pytest.approx(0.1 * 0.5 ** (1 / 5))

    @pytest.mark.slow
    def test_type2_high_q(self):
        spec = spectrum("type2", n=2000, i0=100)
        r = verify.check_powerlaw_theorem(spec, 100, q=7, d=10, trials=100, seed=0, basis="haar", median_floor=0.9)
        assert r.median >= 0.9 and r.verdict


def test_rounding_bound():
    rng = np.random.default_rng(3)
    edges = [(i, j, int(rng.choice([-1, 1]))) for i in range(30) for j in range(i + 1, 30) if rng.random() < 0.2]
    g = from_edges(edges, signed=True, n=30)
    u = rng.standard_normal(30)
    r = verify.check_rounding_bound(g, u, 5.0, trials=2000, seed=0)
    assert r.trials == 2000
    assert "stderr" in r.params


def test_summary_json():
    r = verify.summarize("x", [3.0, 1.0, 2.0], 1.5, True, {"a": 1}, keep_samples=True)
    assert (r.mean, r.median) == (2.0, 2.0)
    out = json.loads(r.to_json())
    assert "samples" not in out and out["verdict"] is True
    assert json.loads(r.to_json(include_samples=True))["samples"] == [1.0, 2.0, 3.0]
