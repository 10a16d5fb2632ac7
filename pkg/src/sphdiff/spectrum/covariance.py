"""Space-time covariance of the random solution and its canonical pseudometric.

	K(eta, eta', Theta) = (4 pi)^-1 sum_l C_l (2l+1) F_l(eta) F_l(eta') P_l(cos Theta)
	d_eta(Theta)^2      = (2 pi)^-1 sum_l C_l (2l+1) F_l(eta)^2 (1 - P_l(cos Theta))
	                    = 2 (K(eta, eta, 0) - K(eta, eta, Theta))
	g_eta(eps)          = inf {Theta : d_eta(Theta) >= eps}
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from sphdiff.model import ModelParams, TimePoint, eta_value, evolution_factors
from sphdiff.special import legendre_table
from sphdiff.spectrum.spectrum import AngularSpectrum

logger = structlog.get_logger(__name__)

RADICAND_TOLERANCE = 1e-12
MIN_RESOLUTION = 100


class ConsistencyError(RuntimeError):
	"""Raised when a quantity that must be nonnegative comes out clearly negative."""
	pass


@dataclass(frozen=True)
class CovarianceQuery:
	"""Two conformal times and an angular distance."""

	eta: float | TimePoint
	eta_prime: float | TimePoint
	theta: float

	def __post_init__(self) -> None:
		if not 0.0 <= self.theta <= math.pi:
			raise ValueError(f"Theta ({self.theta}) must lie in [0, pi]")


@dataclass(frozen=True)
class CapAngle:
	"""g_eta(eps); empty marks the infimum over an empty set (theta = pi)."""

	theta: float
	empty: bool = False


def _check_theta(theta: ArrayLike) -> NDArray[np.float64]:
	arr = np.asarray(theta, dtype=np.float64)
	if np.any(arr < 0) or np.any(arr > math.pi) or np.any(np.isnan(arr)):
		raise ValueError("Theta must lie in [0, pi]")
	return arr


def _unwrap(values: NDArray, like: ArrayLike) -> float | NDArray[np.float64]:
	if np.ndim(like) == 0:
		return float(values)
	return values


def evolved_spectrum(spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint) -> AngularSpectrum:
	"""Spectrum of the solution at time eta: C_l F_l(eta)^2."""
	factors = evolution_factors(params, spec.lmax, eta)
	return AngularSpectrum(spec.cl * factors**2)


def covariance_curve(
	spec: AngularSpectrum,
	params: ModelParams,
	eta: float | TimePoint,
	eta_prime: float | TimePoint,
	theta: ArrayLike,
) -> float | NDArray[np.float64]:
	"""Covariance at (eta, eta') for one or many angular distances."""
	theta_arr = _check_theta(theta)
	weights = spec.multiplicity_weighted * evolution_factors(params, spec.lmax, eta)
	weights = weights * evolution_factors(params, spec.lmax, eta_prime)
	legendre = legendre_table(spec.lmax, np.cos(theta_arr))
	values = np.tensordot(weights, legendre, axes=(0, 0)) / (4.0 * math.pi)
	return _unwrap(values, theta)


def covariance(spec: AngularSpectrum, params: ModelParams, query: CovarianceQuery) -> float:
	return float(covariance_curve(spec, params, query.eta, query.eta_prime, query.theta))


def variance(spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint) -> float:
	"""Pointwise variance (4 pi)^-1 sum_l C_l (2l+1) F_l(eta)^2."""
	factors = evolution_factors(params, spec.lmax, eta)
	return float(np.sum(spec.multiplicity_weighted * factors**2) / (4.0 * math.pi))


def correlation(
	spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint, theta: ArrayLike
) -> float | NDArray[np.float64]:
	"""Spatial correlation K(eta, eta, Theta) / K(eta, eta, 0); NaN for a zero field."""
	var = variance(spec, params, eta)
	values = np.asarray(covariance_curve(spec, params, eta, eta, theta), dtype=np.float64)
	if var == 0.0:
		logger.warning("correlation_zero_variance", eta=eta_value(params, eta))
		values = np.full_like(values, np.nan)
	else:
		values = values / var
	return _unwrap(values, theta)


def covariance_surface(
	spec: AngularSpectrum, params: ModelParams, etas: ArrayLike, theta: ArrayLike
) -> NDArray[np.float64]:
	"""K(eta, eta, Theta) / K(0, 0, 0) on an eta x Theta grid."""
	reference = variance(spec, params, 0.0)
	if reference == 0.0:
		raise ValueError("Covariance surface needs a nonzero initial variance")
	rows = [np.atleast_1d(covariance_curve(spec, params, eta, eta, theta)) for eta in np.atleast_1d(etas)]
	return np.vstack(rows) / reference


def pseudometric(
	spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint, theta: ArrayLike
) -> float | NDArray[np.float64]:
	"""Canonical pseudometric d_eta(Theta).

	Rounding in the (1 - P_l) sum may leave a slightly negative radicand; values
	down to -RADICAND_TOLERANCE (relative to the total weight) are clamped to 0.
	"""
	theta_arr = _check_theta(theta)
	factors = evolution_factors(params, spec.lmax, eta)
	weights = spec.multiplicity_weighted * factors**2
	legendre = legendre_table(spec.lmax, np.cos(theta_arr))
	radicand = np.tensordot(weights, 1.0 - legendre, axes=(0, 0))

	floor = -RADICAND_TOLERANCE * max(1.0, float(np.sum(weights)))
	if np.any(radicand < floor):
		raise ConsistencyError(f"Negative pseudometric radicand {float(np.min(radicand))}")
	values = np.sqrt(np.clip(radicand, 0.0, None) / (2.0 * math.pi))
	return _unwrap(values, theta)


def theta_grid(resolution: int) -> NDArray[np.float64]:
	if resolution < MIN_RESOLUTION:
		raise ValueError(f"Theta resolution ({resolution}) must be >= {MIN_RESOLUTION}")
	return np.linspace(0.0, math.pi, resolution)


def cap_angles(
	thetas: NDArray[np.float64], distances: NDArray[np.float64], eps: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.bool_]]:
	"""First grid angle whose distance reaches each eps, and the empty-set mask.

	d_eta need not be increasing, so the scan runs over its running maximum;
	the result is nondecreasing in eps.
	"""
	running = np.maximum.accumulate(distances)
	idx = np.searchsorted(running, np.asarray(eps, dtype=np.float64), side="left")
	empty = idx >= thetas.size
	angles = np.where(empty, math.pi, thetas[np.minimum(idx, thetas.size - 1)])
	return angles, empty


def g_eps(
	spec: AngularSpectrum,
	params: ModelParams,
	eta: float | TimePoint,
	eps: float,
	resolution: int = 1000,
) -> CapAngle:
	"""g_eta(eps) on a uniform Theta grid with ``resolution`` points on [0, pi]."""
	if eps < 0:
		raise ValueError(f"eps ({eps}) must be >= 0")
	thetas = theta_grid(resolution)
	distances = np.asarray(pseudometric(spec, params, eta, thetas))
	angles, empty = cap_angles(thetas, distances, eps)
	if bool(empty):
		logger.warning("g_eps_empty", eps=eps, max_distance=float(distances.max()))
	return CapAngle(theta=float(angles), empty=bool(empty))
