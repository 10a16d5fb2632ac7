"""Tests for spectra, covariance, pseudometric, truncation norms and decay diagnostics."""

import importlib
import json
import math

import numpy as np
import pytest

from sphdiff.model import HorizonError, evolution_factors
from sphdiff.special import angular_distance
from sphdiff.spectrum import (
	AngularSpectrum,
	ConditionKind,
	ConditionStatus,
	ConsistencyError,
	CovarianceQuery,
	SpectrumFormatError,
	SpectrumValidationError,
	builtin_spectrum,
	cap_angles,
	check_condition,
	correlation,
	covariance,
	covariance_curve,
	covariance_surface,
	envelope,
	evolved_spectrum,
	g_eps,
	head_variance,
	load_spectrum,
	pseudometric,
	save_spectrum,
	tail_variance,
	theta_grid,
	time_increment_norm,
	truncation_error,
	variance,
)

covariance_module = importlib.import_module("sphdiff.spectrum.covariance")


class TestAngularSpectrum:
	def test_properties(self):
		spec = AngularSpectrum([1.0, 2.0, 3.0])
		assert spec.lmax == 2
		np.testing.assert_array_equal(spec.degrees, [0, 1, 2])
		np.testing.assert_array_equal(spec.multiplicity_weighted, [1.0, 6.0, 15.0])
		assert spec.weighted_sum == 22.0

	def test_read_only(self):
		spec = AngularSpectrum([1.0, 2.0])
		with pytest.raises(ValueError):
			spec.cl[0] = 5.0

	def test_rejects_negative(self):
		with pytest.raises(SpectrumValidationError) as exc:
			AngularSpectrum([1.0, -1.0, 2.0])
		assert exc.value.l == 1

	def test_rejects_empty(self):
		with pytest.raises(SpectrumValidationError):
			AngularSpectrum([])

	def test_tail(self):
		spec = AngularSpectrum([1.0, 2.0, 3.0, 4.0])
		np.testing.assert_array_equal(spec.tail(1).cl, [0.0, 0.0, 3.0, 4.0])
		np.testing.assert_array_equal(spec.tail(-1).cl, spec.cl)

	def test_truncated(self):
		assert AngularSpectrum([1.0, 2.0, 3.0]).truncated(1).lmax == 1


class TestBuiltinSpectra:
	def test_cmb_like_drops_monopole_and_dipole(self):
		spec = builtin_spectrum("cmb_like", 300)
		assert spec.cl[0] == 0.0 and spec.cl[1] == 0.0
		assert np.all(spec.cl[2:] > 0)

	def test_cmb_like_has_acoustic_peak(self):
		spec = builtin_spectrum("cmb_like", 400)
		band = spec.degrees * (spec.degrees + 1.0) * spec.cl / (2 * math.pi)
		assert 180 < int(np.argmax(band)) < 260

	def test_power_law(self):
		spec = builtin_spectrum("power_law", 10, amplitude=2.0, index=2.0)
		assert spec.cl[3] == pytest.approx(2.0 / 16.0)

	def test_flat(self):
		np.testing.assert_array_equal(builtin_spectrum("flat", 4, amplitude=0.5).cl, 0.5)

	def test_unknown_name(self):
		with pytest.raises(ValueError):
			builtin_spectrum("unknown", 10)


class TestSpectrumFile:
	def test_save_and_load_bit_exact(self, tmp_path):
		spec = AngularSpectrum([0.0, 0.1 + 0.2, 1.0 / 3.0, 1e-300])
		path = save_spectrum(spec, tmp_path / "cl.csv")
		np.testing.assert_array_equal(load_spectrum(path).cl, spec.cl)

	def test_bad_header(self, tmp_path):
		path = tmp_path / "cl.csv"
		path.write_text("ell,C\n0,1.0\n")
		with pytest.raises(SpectrumFormatError) as exc:
			load_spectrum(path)
		assert exc.value.line == 1

	def test_unparsable_value_reports_line(self, tmp_path):
		path = tmp_path / "cl.csv"
		path.write_text("l,Cl\n0,1.0\n1,abc\n")
		with pytest.raises(SpectrumFormatError) as exc:
			load_spectrum(path)
		assert exc.value.line == 3

	def test_non_contiguous(self, tmp_path):
		path = tmp_path / "cl.csv"
		path.write_text("l,Cl\n0,1.0\n2,1.0\n")
		with pytest.raises(SpectrumValidationError) as exc:
			load_spectrum(path)
		assert exc.value.l == 1

	def test_negative_value(self, tmp_path):
		path = tmp_path / "cl.csv"
		path.write_text("l,Cl\n0,1.0\n1,-0.5\n")
		with pytest.raises(SpectrumValidationError):
			load_spectrum(path)

	def test_missing_file(self, tmp_path):
		with pytest.raises(FileNotFoundError):
			load_spectrum(tmp_path / "missing.csv")


class TestCovariance:
	def test_variance_of_flat_spectrum_at_origin(self, params, flat_spectrum):
		assert variance(flat_spectrum, params, 0.0) == pytest.approx(81 / (4 * math.pi))

	def test_zero_angle_is_variance(self, params, small_spectrum):
		assert covariance_curve(small_spectrum, params, 0.2, 0.2, 0.0) == pytest.approx(
			variance(small_spectrum, params, 0.2)
		)

	def test_symmetric_in_time(self, params, small_spectrum):
		theta = np.linspace(0, math.pi, 9)
		np.testing.assert_allclose(
			covariance_curve(small_spectrum, params, 0.1, 0.4, theta),
			covariance_curve(small_spectrum, params, 0.4, 0.1, theta),
		)

	def test_query(self, params, small_spectrum):
		query = CovarianceQuery(eta=0.1, eta_prime=0.3, theta=0.5)
		assert covariance(small_spectrum, params, query) == pytest.approx(
			covariance_curve(small_spectrum, params, 0.1, 0.3, 0.5)
		)

	def test_query_rejects_angle(self):
		with pytest.raises(ValueError):
			CovarianceQuery(eta=0.1, eta_prime=0.1, theta=4.0)

	def test_evolved_spectrum(self, params, small_spectrum):
		factors = evolution_factors(params, small_spectrum.lmax, 0.3)
		np.testing.assert_allclose(evolved_spectrum(small_spectrum, params, 0.3).cl, small_spectrum.cl * factors**2)

	def test_rejects_horizon(self, params, small_spectrum):
		with pytest.raises(HorizonError):
			variance(small_spectrum, params, 1.0)

	def test_gram_matrix_positive_semidefinite(self, params, small_spectrum):
		rng = np.random.default_rng(3)
		theta = np.arccos(rng.uniform(-1.0, 1.0, 20))
		phi = rng.uniform(0.0, 2 * math.pi, 20)
		angles = angular_distance(theta[:, None], phi[:, None], theta[None, :], phi[None, :])
		gram = covariance_curve(small_spectrum, params, 0.3, 0.3, angles)
		assert np.linalg.eigvalsh(gram).min() >= -1e-8 * np.trace(gram)

	def test_cauchy_schwarz(self, params, small_spectrum):
		theta = np.linspace(0, math.pi, 13)
		for eta, eta_prime in [(0.0, 0.3), (0.1, 0.8), (0.5, 0.5)]:
			limit = math.sqrt(variance(small_spectrum, params, eta) * variance(small_spectrum, params, eta_prime))
			values = covariance_curve(small_spectrum, params, eta, eta_prime, theta)
			assert np.all(np.abs(values) <= limit + 1e-10)


class TestCorrelation:
	def test_unity_at_zero_angle(self, params, small_spectrum):
		assert correlation(small_spectrum, params, 0.3, 0.0) == pytest.approx(1.0)

	def test_bounded(self, params, small_spectrum):
		values = correlation(small_spectrum, params, 0.3, np.linspace(0, math.pi, 50))
		assert np.all(np.abs(values) <= 1.0 + 1e-12)

	def test_zero_field_is_nan(self, params, zero_spectrum):
		assert math.isnan(correlation(zero_spectrum, params, 0.1, 0.5))


class TestCovarianceSurface:
	def test_shape_and_normalization(self, params, small_spectrum):
		surface = covariance_surface(small_spectrum, params, [0.0, 0.1, 0.2], np.linspace(0, math.pi, 5))
		assert surface.shape == (3, 5)
		assert surface[0, 0] == pytest.approx(1.0)

	def test_zero_initial_variance(self, params, zero_spectrum):
		with pytest.raises(ValueError):
			covariance_surface(zero_spectrum, params, [0.0], [0.0])


class TestPseudometric:
	def test_zero_at_origin(self, params, small_spectrum):
		assert pseudometric(small_spectrum, params, 0.2, 0.0) == 0.0

	def test_matches_covariance_identity(self, params, small_spectrum):
		theta = np.linspace(0, math.pi, 25)
		var = variance(small_spectrum, params, 0.2)
		cov = covariance_curve(small_spectrum, params, 0.2, 0.2, theta)
		d = pseudometric(small_spectrum, params, 0.2, theta)
		np.testing.assert_allclose(d**2, 2 * (var - cov), atol=1e-14)

	def test_negative_radicand_raises(self, params, small_spectrum, monkeypatch):
		def doubled(lmax, x):
			return np.full((lmax + 1,) + np.shape(x), 2.0)

		monkeypatch.setattr(covariance_module, "legendre_table", doubled)
		with pytest.raises(ConsistencyError):
			pseudometric(small_spectrum, params, 0.2, np.array([0.5]))

	def test_rejects_angle(self, params, small_spectrum):
		with pytest.raises(ValueError):
			pseudometric(small_spectrum, params, 0.2, -0.1)

	def test_triangle_inequality(self, params, small_spectrum):
		rng = np.random.default_rng(11)
		theta = np.arccos(rng.uniform(-1.0, 1.0, (3, 200)))
		phi = rng.uniform(0.0, 2 * math.pi, (3, 200))

		def d(i, j):
			return pseudometric(small_spectrum, params, 0.2, angular_distance(theta[i], phi[i], theta[j], phi[j]))

		assert np.all(d(0, 1) <= d(0, 2) + d(2, 1) + 1e-10)


class TestCapAngle:
	def test_running_maximum(self):
		thetas = np.array([0.0, 1.0, 2.0, 3.0])
		distances = np.array([0.0, 1.0, 0.5, 2.0])
		angles, empty = cap_angles(thetas, distances, [0.0, 0.75, 1.5, 3.0])
		np.testing.assert_array_equal(angles, [0.0, 1.0, 3.0, math.pi])
		np.testing.assert_array_equal(empty, [False, False, False, True])

	def test_nondecreasing_in_eps(self, params, small_spectrum):
		thetas = theta_grid(500)
		d = pseudometric(small_spectrum, params, 0.1, thetas)
		angles, _ = cap_angles(thetas, d, np.linspace(0, d.max(), 100))
		assert np.all(np.diff(angles) >= 0)

	def test_g_eps_empty_set(self, params, small_spectrum):
		result = g_eps(small_spectrum, params, 0.1, 1e6)
		assert result.empty
		assert result.theta == math.pi

	def test_g_eps_zero(self, params, small_spectrum):
		result = g_eps(small_spectrum, params, 0.1, 0.0)
		assert result.theta == 0.0
		assert not result.empty

	def test_g_eps_stable_under_refinement(self, params):
		spec = builtin_spectrum("cmb_like", 256)
		radius = pseudometric(spec, params, 0.001, theta_grid(1000)).max()
		coarse = g_eps(spec, params, 0.001, 0.5 * radius, resolution=1000)
		fine = g_eps(spec, params, 0.001, 0.5 * radius, resolution=4000)
		assert abs(fine.theta - coarse.theta) <= math.pi / 999

	def test_theta_grid_minimum(self):
		with pytest.raises(ValueError):
			theta_grid(50)


class TestTruncation:
	def test_full_band_is_zero(self, params, small_spectrum):
		result = truncation_error(small_spectrum, params, 0.1, small_spectrum.lmax)
		assert result.exact_norm == 0.0
		assert result.series_bound == 0.0

	@pytest.mark.parametrize("L", [-1, 0, 3, 8, 15])
	def test_bound_dominates_exact(self, params, small_spectrum, L):
		result = truncation_error(small_spectrum, params, 0.3, L)
		assert 0.0 <= result.exact_norm <= result.series_bound

	def test_exact_norm_decreases_with_L(self, params, small_spectrum):
		norms = [truncation_error(small_spectrum, params, 0.3, L).exact_norm for L in range(-1, 17)]
		assert np.all(np.diff(norms) <= 1e-15)

	def test_no_truncation_matches_variance(self, params, small_spectrum):
		result = truncation_error(small_spectrum, params, 0.3, -1)
		assert result.exact_norm**2 == pytest.approx(4 * math.pi * variance(small_spectrum, params, 0.3))

	def test_head_plus_tail_is_variance(self, params, small_spectrum):
		total = variance(small_spectrum, params, 0.2)
		assert head_variance(small_spectrum, params, 0.2, 5) + tail_variance(small_spectrum, params, 0.2, 5) == (
			pytest.approx(total)
		)

	def test_envelope_includes_initial_time(self, params):
		assert envelope(params, np.arange(1, 10), 0.5) == pytest.approx(1.0)
		assert envelope(params, np.array([], dtype=int), 0.5) == 0.0

	@pytest.mark.parametrize("L", [-2, 17])
	def test_rejects_out_of_range(self, params, small_spectrum, L):
		with pytest.raises(ValueError):
			truncation_error(small_spectrum, params, 0.1, L)


class TestTimeIncrement:
	def test_shrinks_with_step(self, params, small_spectrum):
		norms = [time_increment_norm(small_spectrum, params, 0.2, h) for h in (1e-1, 1e-2, 1e-3)]
		assert norms[0] > norms[1] > norms[2] > 0

	def test_lipschitz_in_time(self, params, small_spectrum):
		ratios = [time_increment_norm(small_spectrum, params, 0.1, h) / h for h in (1e-2, 1e-3, 1e-4)]
		assert max(ratios) <= 2.0 * min(ratios)

	def test_rejects_nonpositive_step(self, params, small_spectrum):
		with pytest.raises(ValueError):
			time_increment_norm(small_spectrum, params, 0.2, 0.0)

	def test_rejects_horizon_crossing(self, params, small_spectrum):
		with pytest.raises(HorizonError):
			time_increment_norm(small_spectrum, params, 0.9, 0.2)


class TestConditions:
	def test_power_law_converges(self):
		report = check_condition(builtin_spectrum("power_law", 200), ConditionKind.L2_CONVERGENCE)
		assert report.status is ConditionStatus.OK
		assert report.slope == pytest.approx(-2.0, abs=0.1)
		assert report.fit_range == (100, 200)

	def test_flat_is_slow(self):
		report = check_condition(builtin_spectrum("flat", 200), "L2-convergence")
		assert report.status is ConditionStatus.SLOW
		assert not report.ok

	def test_smoothness_needs_fast_decay(self):
		assert not check_condition(builtin_spectrum("power_law", 200), ConditionKind.C2_SMOOTH).ok
		assert check_condition(builtin_spectrum("power_law", 200, index=14.0), ConditionKind.C2_SMOOTH).ok

	def test_beta_smooth(self):
		report = check_condition(builtin_spectrum("power_law", 200, index=4.0), ConditionKind.BETA_SMOOTH, beta=1.0)
		assert report.beta == 1.0
		assert report.slope == pytest.approx(-2.0, abs=0.1)

	@pytest.mark.parametrize("beta", [None, 0.0, 2.5])
	def test_beta_range(self, beta):
		with pytest.raises(ValueError):
			check_condition(builtin_spectrum("flat", 10), ConditionKind.BETA_SMOOTH, beta=beta)

	def test_zero_tail_has_infinite_slope(self, zero_spectrum):
		report = check_condition(zero_spectrum, ConditionKind.L2_CONVERGENCE)
		assert report.slope == -math.inf
		assert report.ok
		assert report.partial_sum == 0.0

	def test_kind_values_serialize(self):
		assert json.dumps(ConditionKind.C2_SMOOTH.value) == '"C2-smooth"'
