"""Angular power spectra, covariance, pseudometric and truncation norms."""

from sphdiff.spectrum.conditions import ConditionKind, ConditionReport, ConditionStatus, check_condition
from sphdiff.spectrum.covariance import (
	CapAngle,
	ConsistencyError,
	CovarianceQuery,
	cap_angles,
	correlation,
	covariance,
	covariance_curve,
	covariance_surface,
	evolved_spectrum,
	g_eps,
	pseudometric,
	theta_grid,
	variance,
)
from sphdiff.spectrum.spectrum import (
	BUILTIN_SPECTRA,
	AngularSpectrum,
	SpectrumFormatError,
	SpectrumValidationError,
	builtin_spectrum,
	load_spectrum,
	save_spectrum,
)
from sphdiff.spectrum.truncation import (
	TruncationResult,
	envelope,
	head_variance,
	tail_variance,
	time_increment_norm,
	truncation_error,
)

__all__ = [
	"AngularSpectrum",
	"SpectrumFormatError",
	"SpectrumValidationError",
	"BUILTIN_SPECTRA",
	"load_spectrum",
	"save_spectrum",
	"builtin_spectrum",
	"CovarianceQuery",
	"CapAngle",
	"ConsistencyError",
	"evolved_spectrum",
	"covariance",
	"covariance_curve",
	"variance",
	"correlation",
	"covariance_surface",
	"pseudometric",
	"theta_grid",
	"cap_angles",
	"g_eps",
	"TruncationResult",
	"truncation_error",
	"envelope",
	"tail_variance",
	"head_variance",
	"time_increment_norm",
	"ConditionKind",
	"ConditionStatus",
	"ConditionReport",
	"check_condition",
]
