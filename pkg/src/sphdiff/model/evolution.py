"""Temporal evolution factors F_l(eta) of the diffusion solution.

For l >= 1 the closed form is

	F_l(eta) = (eta_inf - eta)^nu (K1 J_nu(z_l (eta_inf - eta)) + K2 Y_nu(z_l (eta_inf - eta)))

	K1 =  pi z_l Y_{nu-1}(z_l eta_inf) / (2 eta_inf^(nu-1))
	K2 = -pi z_l J_{nu-1}(z_l eta_inf) / (2 eta_inf^(nu-1))

and F_0 = 1. It is evaluated in the equivalent scaled form

	F_l = (pi x / 2) (s / eta_inf)^nu (Y_{nu-1}(x) J_nu(y) - J_{nu-1}(x) Y_nu(y))

with x = z_l eta_inf, s = eta_inf - eta, y = z_l s, which keeps every factor
O(1) for large z_l. The Wronskian makes F_l(0) = 1.
"""

from __future__ import annotations

import math

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from sphdiff.model.params import ModelParams, TimePoint, eta_value, expansion_factor
from sphdiff.special import bessel_j, bessel_y, legendre_table

logger = structlog.get_logger(__name__)


def _check_degrees(l: ArrayLike, minimum: int = 0) -> NDArray[np.int64]:
	l_arr = np.asarray(l)
	if not np.all(np.equal(np.mod(l_arr, 1), 0)) or np.any(l_arr < minimum):
		raise ValueError(f"Degrees must be integers >= {minimum}")
	return l_arr.astype(np.int64)


def _closed_form(params: ModelParams, l: NDArray[np.int64], eta: float) -> NDArray[np.float64]:
	nu = params.nu
	z = np.asarray(params.z(l), dtype=np.float64)
	x = z * params.eta_inf
	s = params.eta_inf - eta
	y = z * s
	bracket = bessel_y(nu - 1.0, x) * bessel_j(nu, y) - bessel_j(nu - 1.0, x) * bessel_y(nu, y)
	return 0.5 * math.pi * x * (s / params.eta_inf) ** nu * bracket


def evolution_factor(params: ModelParams, l: ArrayLike, eta: float | TimePoint) -> float | NDArray[np.float64]:
	"""F_l(eta) for one degree or an array of degrees."""
	value = eta_value(params, eta)
	l_arr = _check_degrees(l)
	flat = l_arr.reshape(-1)
	result = np.ones(flat.shape, dtype=np.float64)
	positive = flat > 0
	if np.any(positive):
		result[positive] = _closed_form(params, flat[positive], value)
	result = result.reshape(l_arr.shape)
	if np.ndim(l) == 0:
		return float(result)
	return result


def evolution_factors(params: ModelParams, lmax: int, eta: float | TimePoint) -> NDArray[np.float64]:
	"""F_0(eta)..F_lmax(eta)."""
	return np.asarray(evolution_factor(params, np.arange(lmax + 1), eta), dtype=np.float64)


def evolution_factor_asymptotic(
	params: ModelParams, l: ArrayLike, eta: float | TimePoint
) -> float | NDArray[np.float64]:
	"""Large-degree form cos(z_l eta) / e(eta)^(nu - 1/2)."""
	value = eta_value(params, eta)
	l_arr = _check_degrees(l, minimum=1)
	z = np.asarray(params.z(l_arr), dtype=np.float64)
	result = np.cos(z * value) / expansion_factor(params, value) ** (params.nu - 0.5)
	if np.ndim(l) == 0:
		return float(result)
	return result


def fundamental_solution(
	params: ModelParams, eta: float | TimePoint, theta: ArrayLike, L: int
) -> float | NDArray[np.float64]:
	"""L-truncated deterministic solution sum_l F_l (2l+1)/(4 pi) P_l(cos Theta)."""
	if L < 0:
		raise ValueError(f"Truncation degree L ({L}) must be >= 0")
	factors = evolution_factors(params, L, eta)
	theta_arr = np.asarray(theta, dtype=np.float64)
	if np.any(theta_arr < 0) or np.any(theta_arr > math.pi):
		raise ValueError("Theta must lie in [0, pi]")
	legendre = legendre_table(L, np.cos(theta_arr))
	weights = factors * (2.0 * np.arange(L + 1) + 1.0) / (4.0 * math.pi)
	values = np.tensordot(weights, legendre, axes=(0, 0))
	if np.ndim(theta) == 0:
		return float(values)
	return values
