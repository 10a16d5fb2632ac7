"""Gaussian harmonic coefficients, their evolution, and field synthesis."""

from sphdiff.field.coefficients import (
	CoefficientFormatError,
	HarmonicCoefficients,
	empirical_spectrum,
	evolve_coefficients,
	load_coefficients,
	sample_coefficients,
	save_coefficients,
	tail_coefficients,
)
from sphdiff.field.rng import GaussianStream, realization_seed
from sphdiff.field.synthesis import (
	GRID_KINDS,
	MAX_GRID_POINTS,
	FieldMap,
	ResourceLimitError,
	SphericalGrid,
	Synthesizer,
	analyze,
	evaluate_point,
	evaluate_points,
	fejer_weights,
	integrate,
	synthesize,
)

__all__ = [
	"GaussianStream",
	"realization_seed",
	"HarmonicCoefficients",
	"CoefficientFormatError",
	"sample_coefficients",
	"evolve_coefficients",
	"tail_coefficients",
	"empirical_spectrum",
	"load_coefficients",
	"save_coefficients",
	"SphericalGrid",
	"FieldMap",
	"Synthesizer",
	"ResourceLimitError",
	"GRID_KINDS",
	"MAX_GRID_POINTS",
	"fejer_weights",
	"synthesize",
	"evaluate_point",
	"evaluate_points",
	"analyze",
	"integrate",
]
