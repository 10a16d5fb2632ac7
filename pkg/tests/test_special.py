"""Tests for Bessel, Legendre and spherical harmonic functions."""

import math

import numpy as np
import pytest
from scipy import special as sp_special

from sphdiff.special import (
	DomainError,
	angular_distance,
	assoc_legendre,
	bessel_j,
	bessel_y,
	legendre_p,
	legendre_table,
	normalized_legendre_column,
	normalized_legendre_table,
	sph_harm,
)


class TestBesselJ:
	def test_half_integer_closed_form(self):
		x = np.linspace(0.1, 40.0, 200)
		expected = np.sqrt(2.0 / (math.pi * x)) * np.sin(x)
		# relative to the envelope, since sin has zeros
		assert np.max(np.abs(bessel_j(0.5, x) - expected) / np.sqrt(2.0 / (math.pi * x))) < 1e-12

	def test_scalar_in_scalar_out(self):
		assert isinstance(bessel_j(1.5, 2.0), float)
		assert bessel_j(0.0, 0.0) == pytest.approx(1.0)

	def test_rejects_order_below_minus_half(self):
		with pytest.raises(DomainError):
			bessel_j(-1.0, 1.0)

	def test_rejects_negative_argument(self):
		with pytest.raises(DomainError):
			bessel_j(1.0, -0.5)


class TestBesselY:
	def test_half_integer_closed_form(self):
		x = np.linspace(0.1, 40.0, 200)
		expected = -np.sqrt(2.0 / (math.pi * x)) * np.cos(x)
		assert np.max(np.abs(bessel_y(0.5, x) - expected) / np.sqrt(2.0 / (math.pi * x))) < 1e-12

	@pytest.mark.parametrize("nu", [0.3, 1.7, 3.25])
	def test_matches_scipy_for_noninteger_order(self, nu):
		x = np.linspace(0.5, 30.0, 60)
		np.testing.assert_allclose(bessel_y(nu, x), sp_special.yv(nu, x), rtol=1e-8, atol=1e-12)

	def test_near_integer_order_snaps(self):
		assert bessel_y(1.0 + 1e-9, 2.0) == pytest.approx(sp_special.yn(1, 2.0), rel=1e-12)
		assert bessel_y(2.0, 3.0) == pytest.approx(sp_special.yn(2, 3.0), rel=1e-12)

	def test_wronskian(self):
		x = np.linspace(0.5, 50.0, 100)
		nu = 1.5
		w = bessel_j(nu + 1, x) * bessel_y(nu, x) - bessel_j(nu, x) * bessel_y(nu + 1, x)
		np.testing.assert_allclose(w, 2.0 / (math.pi * x), rtol=1e-9)

	def test_rejects_zero_argument(self):
		with pytest.raises(DomainError):
			bessel_y(1.0, 0.0)


class TestLegendre:
	def test_low_degrees(self):
		x = np.linspace(-1.0, 1.0, 21)
		table = legendre_table(3, x)
		assert table.shape == (4, 21)
		np.testing.assert_allclose(table[2], (3 * x**2 - 1) / 2, atol=1e-15)
		np.testing.assert_allclose(table[3], (5 * x**3 - 3 * x) / 2, atol=1e-15)

	def test_endpoints(self):
		for l in range(30):
			assert legendre_p(l, 1.0) == pytest.approx(1.0)
			assert legendre_p(l, -1.0) == pytest.approx((-1.0) ** l)

	def test_bounded_by_one(self):
		x = np.linspace(-1.0, 1.0, 501)
		assert np.all(np.abs(legendre_table(200, x)) <= 1.0 + 1e-12)

	def test_rejects_argument_outside_unit_interval(self):
		with pytest.raises(DomainError):
			legendre_p(2, 1.5)

	def test_rejects_negative_degree(self):
		with pytest.raises(DomainError):
			legendre_table(-1, 0.0)


class TestAssocLegendre:
	def test_condon_shortley_phase(self):
		x = 0.3
		s = math.sqrt(1 - x * x)
		assert assoc_legendre(1, 1, x) == pytest.approx(-s)
		assert assoc_legendre(2, 1, x) == pytest.approx(-3 * x * s)
		assert assoc_legendre(2, 2, x) == pytest.approx(3 * (1 - x * x))

	def test_negative_order(self):
		x = 0.3
		assert assoc_legendre(1, -1, x) == pytest.approx(0.5 * math.sqrt(1 - x * x))

	def test_order_zero_is_legendre(self):
		x = np.linspace(-1, 1, 11)
		np.testing.assert_allclose(assoc_legendre(7, 0, x), legendre_p(7, x), atol=1e-14)

	@pytest.mark.parametrize("x", [-0.8, 0.0, 0.4, 0.95])
	def test_derivative_formula(self, x):
		# P_l^m = (-1)^m (1 - x^2)^(m/2) d^m/dx^m P_l
		derivative = np.polynomial.legendre.Legendre.basis(10).deriv(7)(x)
		expected = -((1.0 - x * x) ** 3.5) * derivative
		assert assoc_legendre(10, 7, x) == pytest.approx(expected, rel=1e-10, abs=1e-10)

	def test_rejects_order_above_degree(self):
		with pytest.raises(DomainError):
			assoc_legendre(2, 3, 0.1)


class TestNormalizedLegendre:
	def test_matches_scaled_assoc_legendre(self):
		x = np.linspace(-0.95, 0.95, 13)
		table = normalized_legendre_table(10, x)
		for l in range(11):
			for m in range(l + 1):
				d = math.sqrt((2 * l + 1) / (4 * math.pi) * math.exp(math.lgamma(l - m + 1) - math.lgamma(l + m + 1)))
				np.testing.assert_allclose(table[m, l], d * assoc_legendre(l, m, x), rtol=1e-10, atol=1e-14)

	def test_zero_below_order(self):
		table = normalized_legendre_table(6, np.array([0.2, 0.7]))
		for m in range(7):
			assert np.all(table[m, :m] == 0)

	def test_column_agrees_with_table(self):
		x = np.linspace(-1, 1, 9)
		table = normalized_legendre_table(12, x)
		np.testing.assert_allclose(normalized_legendre_column(12, 5, x), table[5, 12], atol=1e-14)

	def test_stable_at_high_degree(self):
		table = normalized_legendre_table(1000, np.array([0.0, 0.5]))
		assert np.all(np.isfinite(table))


class TestSphHarm:
	def test_low_order_values(self):
		theta, phi = 0.7, 1.1
		assert sph_harm(0, 0, theta, phi) == pytest.approx(1 / math.sqrt(4 * math.pi))
		assert sph_harm(1, 0, theta, phi) == pytest.approx(math.sqrt(3 / (4 * math.pi)) * math.cos(theta))
		y11 = -math.sqrt(3 / (8 * math.pi)) * math.sin(theta) * complex(math.cos(phi), math.sin(phi))
		assert sph_harm(1, 1, theta, phi) == pytest.approx(y11)

	def test_negative_order_symmetry(self):
		theta, phi = 1.3, 4.0
		assert sph_harm(3, -2, theta, phi) == pytest.approx(np.conj(sph_harm(3, 2, theta, phi)))
		assert sph_harm(3, -1, theta, phi) == pytest.approx(-np.conj(sph_harm(3, 1, theta, phi)))

	@pytest.mark.parametrize("l", [6, 20, 64])
	def test_addition_theorem(self, l):
		theta1, phi1, theta2, phi2 = 0.4, 1.2, 2.1, 5.0
		total = sum(sph_harm(l, m, theta1, phi1) * np.conj(sph_harm(l, m, theta2, phi2)) for m in range(-l, l + 1))
		gamma = angular_distance(theta1, phi1, theta2, phi2)
		expected = (2 * l + 1) / (4 * math.pi) * legendre_p(l, math.cos(gamma))
		assert total.real == pytest.approx(expected, abs=1e-10)
		assert abs(total.imag) < 1e-10

	def test_orthonormal(self):
		lmax = 8
		x, w = np.polynomial.legendre.leggauss(lmax + 1)
		phi = 2 * math.pi * np.arange(2 * lmax + 1) / (2 * lmax + 1)
		theta_grid, phi_grid = np.meshgrid(np.arccos(x), phi, indexing="ij")
		weights = np.outer(w, np.full(phi.size, 2 * math.pi / phi.size))
		modes = [
			sph_harm(l, m, theta_grid, phi_grid).ravel() for l in range(lmax + 1) for m in range(-l, l + 1)
		]
		basis = np.array(modes)
		gram = (basis * weights.ravel()) @ basis.conj().T
		np.testing.assert_allclose(gram, np.eye(len(modes)), atol=1e-12)

	def test_rejects_theta_outside_range(self):
		with pytest.raises(DomainError):
			sph_harm(1, 0, -0.1, 0.0)


class TestAngularDistance:
	def test_pole_to_equator(self):
		assert angular_distance(0.0, 0.0, math.pi / 2, 1.0) == pytest.approx(math.pi / 2)

	def test_antipodes(self):
		assert angular_distance(math.pi / 2, 0.0, math.pi / 2, math.pi) == pytest.approx(math.pi)
