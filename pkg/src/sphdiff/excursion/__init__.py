"""Suprema of the evolved field: Monte Carlo samples, entropy integral and excursion bounds."""

from sphdiff.excursion.bounds import (
	BoundMethod,
	BoundReport,
	excursion_bound,
	excursion_bound_entropy,
	truncation_excursion_bound,
)
from sphdiff.excursion.entropy import DEFAULT_K, EPS_FLOOR, K_CAVEAT, EntropyIntegral, entropy_integral
from sphdiff.excursion.montecarlo import (
	ExceedanceCurve,
	RefinementReport,
	SupSample,
	exceedance_curve,
	mc_sup_distribution,
)

__all__ = [
	"SupSample",
	"RefinementReport",
	"ExceedanceCurve",
	"mc_sup_distribution",
	"exceedance_curve",
	"EntropyIntegral",
	"entropy_integral",
	"EPS_FLOOR",
	"DEFAULT_K",
	"K_CAVEAT",
	"BoundMethod",
	"BoundReport",
	"excursion_bound",
	"excursion_bound_entropy",
	"truncation_excursion_bound",
]
