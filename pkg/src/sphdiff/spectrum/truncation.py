"""Truncation and time-increment norms in L2(Omega x S^2).

	||u - u_L||^2 = sum_{l>L} C_l (2l+1) F_l(eta)^2

The bound constant is realized as the envelope max_{l>L} |F_l| over an eta
grid that also contains the requested time, so exact_norm <= series_bound
holds for every band-limited spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import structlog

from sphdiff.model import ModelParams, TimePoint, eta_value, evolution_factor, evolution_factors
from sphdiff.spectrum.spectrum import AngularSpectrum

logger = structlog.get_logger(__name__)

ENVELOPE_GRID_POINTS = 200
ENVELOPE_GRID_FRACTION = 0.99


@dataclass(frozen=True)
class TruncationResult:
	"""Exact tail norm and its computable bound at one truncation degree L."""

	L: int
	exact_norm: float
	series_bound: float
	envelope: float


def _check_truncation(spec: AngularSpectrum, L: int) -> None:
	if L < -1:
		raise ValueError(f"Truncation degree L ({L}) must be >= -1 (-1 keeps no degree)")
	if L > spec.lmax:
		raise ValueError(f"Truncation degree L ({L}) exceeds lmax ({spec.lmax})")


def envelope(params: ModelParams, degrees: np.ndarray, eta: float, n_grid: int = ENVELOPE_GRID_POINTS) -> float:
	"""max |F_l| over the given degrees on an eta grid in [0, 0.99 eta_inf] plus eta."""
	if degrees.size == 0:
		return 0.0
	grid = np.append(np.linspace(0.0, ENVELOPE_GRID_FRACTION * params.eta_inf, n_grid), eta)
	return float(max(np.max(np.abs(evolution_factor(params, degrees, e))) for e in grid))


def truncation_error(
	spec: AngularSpectrum,
	params: ModelParams,
	eta: float | TimePoint,
	L: int,
	n_grid: int = ENVELOPE_GRID_POINTS,
) -> TruncationResult:
	"""Tail norm ||u(eta) - u_L(eta)|| and the bound B (sum_{l>L} C_l (2l+1))^(1/2)."""
	_check_truncation(spec, L)
	value = eta_value(params, eta)
	if L == spec.lmax:
		return TruncationResult(L=L, exact_norm=0.0, series_bound=0.0, envelope=0.0)

	factors = evolution_factors(params, spec.lmax, value)
	tail = slice(L + 1, None)
	weighted = spec.multiplicity_weighted[tail]
	exact = math.sqrt(float(np.sum(weighted * factors[tail] ** 2)))
	bound_constant = envelope(params, spec.degrees[tail], value, n_grid)
	bound = bound_constant * math.sqrt(float(np.sum(weighted)))
	return TruncationResult(L=L, exact_norm=exact, series_bound=max(bound, exact), envelope=bound_constant)


def tail_variance(spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint, L: int) -> float:
	"""sigma_{eta,L}^2 = (4 pi)^-1 sum_{l>L} C_l (2l+1) F_l^2."""
	_check_truncation(spec, L)
	factors = evolution_factors(params, spec.lmax, eta)
	return float(np.sum((spec.multiplicity_weighted * factors**2)[L + 1 :]) / (4.0 * math.pi))


def head_variance(spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint, L: int) -> float:
	"""Variance of the truncated field u_L: (4 pi)^-1 sum_{l<=L} C_l (2l+1) F_l^2."""
	_check_truncation(spec, L)
	factors = evolution_factors(params, spec.lmax, eta)
	return float(np.sum((spec.multiplicity_weighted * factors**2)[: L + 1]) / (4.0 * math.pi))


def time_increment_norm(spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint, h: float) -> float:
	"""||u(eta + h) - u(eta)|| = (sum_l C_l (2l+1) (F_l(eta+h) - F_l(eta))^2)^(1/2)."""
	if not h > 0:
		raise ValueError(f"Increment h ({h}) must be positive")
	value = eta_value(params, eta)
	later = eta_value(params, value + h)
	diff = evolution_factors(params, spec.lmax, later) - evolution_factors(params, spec.lmax, value)
	return math.sqrt(float(np.sum(spec.multiplicity_weighted * diff**2)))
