"""Entropy bound on the expected supremum.

	E sup u(eta) <= K int_0^R sqrt(log(2 / (1 - cos g_eta(eps)))) d eps,   R = max d_eta

The integrand blows up (integrably) at eps -> 0. The integral is taken with
midpoint nodes on a geometric eps grid from R * EPS_FLOOR to R. On the
omitted interval [0, R * EPS_FLOOR] the integrand is at most its value at the
first nonzero grid angle, which gives the reported sliver bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog
from numpy.typing import NDArray

from sphdiff.model import ModelParams, TimePoint, eta_value
from sphdiff.spectrum import (
	AngularSpectrum,
	ConditionKind,
	ConditionReport,
	cap_angles,
	check_condition,
	evolved_spectrum,
	pseudometric,
	theta_grid,
)

logger = structlog.get_logger(__name__)

EPS_FLOOR = 1e-6
DEFAULT_K = 1.0
K_CAVEAT = "K has no known numerical value; results scale linearly with it and are not calibrated"


@dataclass(frozen=True)
class EntropyIntegral:
	value: float
	radius: float
	sliver_bound: float
	K: float
	n_eps: int
	theta_resolution: int
	degenerate: bool = False
	condition: ConditionReport | None = None

	@property
	def upper(self) -> float:
		"""Value including the bound on the omitted [0, R * EPS_FLOOR] piece."""
		return self.value + self.sliver_bound


def _integrand(angle: NDArray[np.float64]) -> NDArray[np.float64]:
	return np.sqrt(np.log(2.0 / (1.0 - np.cos(angle))))


def entropy_integral(
	spec: AngularSpectrum,
	params: ModelParams,
	eta: float | TimePoint,
	K: float = DEFAULT_K,
	n_eps: int = 2000,
	theta_resolution: int = 2000,
) -> EntropyIntegral:
	if not K > 0:
		raise ValueError(f"K ({K}) must be positive")
	if n_eps < 1:
		raise ValueError(f"n_eps ({n_eps}) must be >= 1")
	value = eta_value(params, eta)
	condition = check_condition(evolved_spectrum(spec, params, value), ConditionKind.BETA_SMOOTH, beta=2.0)

	thetas = theta_grid(theta_resolution)
	distances = np.asarray(pseudometric(spec, params, value, thetas))
	radius = float(np.max(distances))
	if radius == 0.0:
		logger.warning("entropy_degenerate_radius", eta=value)
		return EntropyIntegral(0.0, 0.0, 0.0, K, n_eps, theta_resolution, degenerate=True, condition=condition)

	edges = np.geomspace(radius * EPS_FLOOR, radius, n_eps + 1)
	nodes = 0.5 * (edges[:-1] + edges[1:])
	angles, _ = cap_angles(thetas, distances, nodes)
	integral = float(np.sum(_integrand(angles) * np.diff(edges)))

	sliver = radius * EPS_FLOOR * float(_integrand(np.array([thetas[1]]))[0])
	result = EntropyIntegral(
		value=K * integral,
		radius=radius,
		sliver_bound=K * sliver,
		K=K,
		n_eps=n_eps,
		theta_resolution=theta_resolution,
		condition=condition,
	)
	logger.info("entropy_integral", value=result.value, radius=radius, sliver=result.sliver_bound, eta=value)
	return result
