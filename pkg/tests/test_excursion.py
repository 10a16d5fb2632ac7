"""Tests for Monte Carlo suprema, the entropy integral and excursion bounds."""

import math

import numpy as np
import pytest

from sphdiff.excursion import (
	BoundMethod,
	SupSample,
	entropy_integral,
	exceedance_curve,
	excursion_bound,
	excursion_bound_entropy,
	mc_sup_distribution,
	truncation_excursion_bound,
)
from sphdiff.field import evolve_coefficients, realization_seed, sample_coefficients, synthesize
from sphdiff.spectrum import builtin_spectrum, tail_variance, variance


@pytest.fixture
def spec():
	return builtin_spectrum("power_law", 8, index=2.0)


class TestExceedanceCurve:
	def test_counts(self):
		curve = exceedance_curve(np.array([1.0, 2.0, 3.0, 4.0]), [0.0, 2.0, 4.0])
		np.testing.assert_array_equal(curve.probability, [1.0, 0.5, 0.0])
		np.testing.assert_allclose(curve.stderr, [0.0, 0.25, 0.0])


class TestSupSample:
	def test_summary(self):
		sample = SupSample(np.array([1.0, 2.0, 3.0, 10.0]), eta=0.1, seed=0, n_theta=4, n_phi=8, lmax=2)
		summary = sample.summary()
		assert summary["n"] == 4
		assert summary["mean"] == pytest.approx(4.0)
		assert summary["median"] == pytest.approx(2.5)
		assert summary["skew"] > 0
		assert sample.header()["grid"] == "4x8"

	def test_rejects_empty(self):
		with pytest.raises(ValueError):
			SupSample(np.array([]), eta=0.1, seed=0, n_theta=4, n_phi=8, lmax=2)


class TestMonteCarlo:
	def test_realization_matches_direct_synthesis(self, params, spec):
		sample = mc_sup_distribution(spec, params, 0.2, 4, 9, 17, seed=30)
		a = evolve_coefficients(sample_coefficients(spec, realization_seed(30, 2)), params, 0.2)
		assert sample.values[2] == pytest.approx(synthesize(a, 9, 17).max(), rel=1e-12)

	def test_reproducible_across_workers(self, params, spec):
		serial = mc_sup_distribution(spec, params, 0.2, 12, 9, 17, seed=5)
		threaded = mc_sup_distribution(spec, params, 0.2, 12, 9, 17, seed=5, workers=3)
		np.testing.assert_array_equal(serial.values, threaded.values)

	def test_absolute_dominates(self, params, spec):
		plain = mc_sup_distribution(spec, params, 0.2, 6, 9, 17, seed=1)
		absolute = mc_sup_distribution(spec, params, 0.2, 6, 9, 17, seed=1, absolute=True)
		assert np.all(absolute.values >= plain.values)

	def test_full_truncation_gives_zero_field(self, params, spec):
		sample = mc_sup_distribution(spec, params, 0.2, 3, 9, 17, tail_from=spec.lmax)
		np.testing.assert_array_equal(sample.values, 0.0)

	def test_refinement_report(self, params, spec):
		sample = mc_sup_distribution(spec, params, 0.2, 5, 9, 17, refine_count=2)
		assert sample.refinement is not None
		assert sample.refinement.count == 2
		assert sample.refinement.factor == 2
		assert "refine_relative_shift" in sample.summary()

	def test_keep_maps(self, params, spec):
		sample = mc_sup_distribution(spec, params, 0.2, 3, 9, 17, keep_maps=True)
		assert len(sample.maps) == 3
		assert sample.maps[0].eta == pytest.approx(0.2)

	@pytest.mark.parametrize("n_real, workers", [(0, 1), (2, 0)])
	def test_rejects_bad_counts(self, params, spec, n_real, workers):
		with pytest.raises(ValueError):
			mc_sup_distribution(spec, params, 0.2, n_real, 9, 17, workers=workers)

	@pytest.mark.slow
	def test_mean_exceeds_pointwise_scale(self, params, spec):
		sample = mc_sup_distribution(spec, params, 0.1, 200, 17, 33, seed=7)
		sigma = math.sqrt(variance(spec, params, 0.1))
		# the sup over many near-independent points sits well above one sigma
		assert sample.mean > sigma
		assert sample.stderr < 0.1 * sample.mean

	@pytest.mark.slow
	def test_sup_skewed_right(self, params):
		sample = mc_sup_distribution(builtin_spectrum("cmb_like", 256), params, 0.001, 300, 128, 256, seed=0)
		assert sample.mean >= sample.median

	@pytest.mark.slow
	def test_bound_dominates_exceedance(self, params):
		spec = builtin_spectrum("power_law", 32)
		sample = mc_sup_distribution(spec, params, 0.1, 300, 33, 65, seed=4)
		xs = np.linspace(sample.values.min(), sample.values.max(), 40)
		curve = exceedance_curve(sample, xs)
		bounds = np.array([excursion_bound(spec, params, 0.1, x, sample.mean).bound for x in xs])
		assert np.all(bounds + 2 * curve.stderr >= curve.probability)


class TestEntropyIntegral:
	def test_positive(self, params, spec):
		result = entropy_integral(spec, params, 0.1, n_eps=200, theta_resolution=200)
		assert result.value > 0
		assert result.upper >= result.value
		assert result.radius > 0
		assert not result.degenerate

	def test_linear_in_K(self, params, spec):
		one = entropy_integral(spec, params, 0.1, K=1.0, n_eps=200, theta_resolution=200)
		two = entropy_integral(spec, params, 0.1, K=2.0, n_eps=200, theta_resolution=200)
		assert two.value == pytest.approx(2 * one.value)
		assert two.sliver_bound == pytest.approx(2 * one.sliver_bound)

	def test_scales_with_root_of_spectrum(self, params, spec):
		one = entropy_integral(spec, params, 0.1, n_eps=200, theta_resolution=200)
		two = entropy_integral(spec.scaled(2.0), params, 0.1, n_eps=200, theta_resolution=200)
		assert two.radius == pytest.approx(math.sqrt(2) * one.radius, rel=1e-12)
		assert two.value == pytest.approx(math.sqrt(2) * one.value, rel=1e-6)
		assert two.upper == pytest.approx(math.sqrt(2) * one.upper, rel=1e-6)

	def test_converges_in_eps_resolution(self, params, spec):
		coarse = entropy_integral(spec, params, 0.1, n_eps=400, theta_resolution=400)
		fine = entropy_integral(spec, params, 0.1, n_eps=1600, theta_resolution=400)
		assert fine.value == pytest.approx(coarse.value, rel=0.05)

	def test_degenerate_field(self, params, zero_spectrum):
		result = entropy_integral(zero_spectrum, params, 0.1, theta_resolution=200)
		assert result.degenerate
		assert result.value == 0.0

	def test_reports_decay_condition(self, params, spec):
		result = entropy_integral(spec, params, 0.1, n_eps=100, theta_resolution=200)
		assert result.condition is not None
		assert result.condition.beta == 2.0

	@pytest.mark.parametrize("kwargs", [{"K": 0.0}, {"n_eps": 0}])
	def test_rejects_parameters(self, params, spec, kwargs):
		with pytest.raises(ValueError):
			entropy_integral(spec, params, 0.1, **kwargs)


class TestExcursionBound:
	def test_matches_formula(self, params, spec):
		sigma_sq = variance(spec, params, 0.2)
		report = excursion_bound(spec, params, 0.2, x=2.0, esup=0.5)
		assert report.valid
		assert report.bound == pytest.approx(math.exp(-(1.5**2) / (2 * sigma_sq)))
		assert report.method is BoundMethod.MC_ESUP

	def test_unity_at_expected_sup(self, params, spec):
		assert excursion_bound(spec, params, 0.2, x=0.5, esup=0.5).bound == 1.0

	def test_invalid_below_expected_sup(self, params, spec):
		report = excursion_bound(spec, params, 0.2, x=0.1, esup=0.5)
		assert not report.valid
		assert report.bound == 1.0

	def test_decreasing_in_x(self, params, spec):
		bounds = [excursion_bound(spec, params, 0.2, x, 0.5).bound for x in np.linspace(0.5, 5.0, 20)]
		assert np.all(np.diff(bounds) <= 0)

	def test_degenerate_variance(self, params, zero_spectrum):
		report = excursion_bound(zero_spectrum, params, 0.2, x=0.1, esup=0.0)
		assert report.degenerate
		assert report.bound == 0.0
		assert excursion_bound(zero_spectrum, params, 0.2, x=0.0, esup=0.0).bound == 1.0

	def test_to_dict(self, params, spec):
		data = excursion_bound(spec, params, 0.2, x=2.0, esup=0.5).to_dict()
		assert data["method"] == "borell-with-mc-esup"
		assert data["L"] is None


class TestEntropyBound:
	def test_threshold_is_strict(self, params, spec):
		entropy = entropy_integral(spec, params, 0.1, n_eps=100, theta_resolution=200)
		at = excursion_bound_entropy(spec, params, 0.1, entropy.upper, entropy=entropy)
		above = excursion_bound_entropy(spec, params, 0.1, entropy.upper + 1.0, entropy=entropy)
		assert not at.valid
		assert above.valid
		assert above.bound < 1.0
		assert above.esup == entropy.upper
		assert above.method is BoundMethod.ENTROPY


class TestTruncationBound:
	def test_factor_two(self, params, spec):
		sigma_sq = tail_variance(spec, params, 0.2, 3)
		report = truncation_excursion_bound(spec, params, 0.2, L=3, x=1.0, esup_trunc=0.2)
		assert report.sigma_sq == pytest.approx(sigma_sq)
		assert report.bound == pytest.approx(min(1.0, 2 * math.exp(-(0.8**2) / (2 * sigma_sq))))
		assert report.L == 3
		assert report.method is BoundMethod.TRUNCATION

	def test_full_band_is_degenerate(self, params, spec):
		report = truncation_excursion_bound(spec, params, 0.2, L=spec.lmax, x=0.1)
		assert report.degenerate
		assert report.bound == 0.0

	def test_entropy_default(self, params, spec):
		report = truncation_excursion_bound(spec, params, 0.2, L=2, x=50.0, n_eps=100, theta_resolution=200)
		assert report.esup > 0
		assert report.valid

	def test_smaller_tail_variance_with_larger_L(self, params, spec):
		low = truncation_excursion_bound(spec, params, 0.2, L=1, x=1.0, esup_trunc=0.0)
		high = truncation_excursion_bound(spec, params, 0.2, L=6, x=1.0, esup_trunc=0.0)
		assert high.sigma_sq < low.sigma_sq
		assert high.bound <= low.bound
