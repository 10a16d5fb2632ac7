"""Borell-TIS excursion bounds for the solution and for its truncation error.

	P(sup u > x)        <= exp(-(x - E sup u)^2 / (2 sigma^2)),      x >= E sup u
	P(sup |u - u_L| > x) <= 2 exp(-(x - E sup)^2 / (2 sigma_L^2))

Thresholds below the expected supremum return a report flagged invalid with
bound 1 instead of raising, so sweeps over x never abort.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

import structlog

from sphdiff.excursion.entropy import DEFAULT_K, EntropyIntegral, entropy_integral
from sphdiff.model import ModelParams, TimePoint, eta_value
from sphdiff.spectrum import AngularSpectrum, tail_variance, variance

logger = structlog.get_logger(__name__)


class BoundMethod(str, Enum):
	MC_ESUP = "borell-with-mc-esup"
	ENTROPY = "borell-with-entropy-K1"
	TRUNCATION = "truncation-corollary"


@dataclass(frozen=True)
class BoundReport:
	x: float
	bound: float
	sigma_sq: float
	esup: float
	method: BoundMethod
	valid: bool = True
	degenerate: bool = False
	L: int | None = None

	def to_dict(self) -> dict[str, Any]:
		data = asdict(self)
		data["method"] = self.method.value
		return data


def _borell(x: float, esup: float, sigma_sq: float, factor: float = 1.0) -> float:
	exponent = -((x - esup) ** 2) / (2.0 * sigma_sq)
	return min(1.0, factor * math.exp(exponent))


def _report(
	x: float, esup: float, sigma_sq: float, method: BoundMethod, factor: float = 1.0, L: int | None = None,
	strict: bool = False,
) -> BoundReport:
	if sigma_sq == 0.0:
		# a zero-variance field is identically 0, so every positive threshold has probability 0
		bound = 0.0 if x > max(esup, 0.0) else 1.0
		return BoundReport(x, bound, 0.0, esup, method, valid=True, degenerate=True, L=L)
	below = x <= esup if strict else x < esup
	if below:
		logger.warning("bound_threshold_invalid", x=x, esup=esup, method=method.value)
		return BoundReport(x, 1.0, sigma_sq, esup, method, valid=False, L=L)
	return BoundReport(x, _borell(x, esup, sigma_sq, factor), sigma_sq, esup, method, L=L)


def excursion_bound(
	spec: AngularSpectrum, params: ModelParams, eta: float | TimePoint, x: float, esup: float
) -> BoundReport:
	"""Bound on P(sup u(eta) > x) given an estimate of E sup u(eta); valid for x >= esup."""
	sigma_sq = variance(spec, params, eta)
	return _report(x, esup, sigma_sq, BoundMethod.MC_ESUP)


def excursion_bound_entropy(
	spec: AngularSpectrum,
	params: ModelParams,
	eta: float | TimePoint,
	x: float,
	K: float = DEFAULT_K,
	entropy: EntropyIntegral | None = None,
	n_eps: int = 2000,
	theta_resolution: int = 2000,
) -> BoundReport:
	"""Bound with E sup replaced by the entropy value K1; valid for x > K1.

	K1 includes the sliver bound so that it stays an upper bound on E sup.
	Pass a precomputed ``entropy`` to sweep x without recomputing it.
	"""
	if entropy is None:
		entropy = entropy_integral(spec, params, eta, K, n_eps, theta_resolution)
	sigma_sq = variance(spec, params, eta)
	return _report(x, entropy.upper, sigma_sq, BoundMethod.ENTROPY, strict=True)


def truncation_excursion_bound(
	spec: AngularSpectrum,
	params: ModelParams,
	eta: float | TimePoint,
	L: int,
	x: float,
	esup_trunc: float | None = None,
	K: float = DEFAULT_K,
	n_eps: int = 2000,
	theta_resolution: int = 2000,
) -> BoundReport:
	"""Two-sided bound on the sup of the truncation error field u - u_L.

	esup_trunc is an estimate of E sup of the tail field; when None the entropy
	value of the tail spectrum is used. L = -1 takes the whole field as tail.
	"""
	value = eta_value(params, eta)
	sigma_sq = tail_variance(spec, params, value, L)
	if esup_trunc is None:
		if sigma_sq == 0.0:
			esup_trunc = 0.0
		else:
			esup_trunc = entropy_integral(spec.tail(L), params, value, K, n_eps, theta_resolution).upper
	if sigma_sq == 0.0:
		logger.info("truncation_tail_degenerate", L=L, lmax=spec.lmax)
	return _report(x, esup_trunc, sigma_sq, BoundMethod.TRUNCATION, factor=2.0, L=L)
