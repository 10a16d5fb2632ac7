"""Model parameters, conformal time and the evolution factors F_l(eta)."""

from sphdiff.model.evolution import (
	evolution_factor,
	evolution_factor_asymptotic,
	evolution_factors,
	fundamental_solution,
)
from sphdiff.model.ode import ConvergenceResult, StepError, evolution_factor_ode, ode_converged
from sphdiff.model.params import (
	HORIZON_GUARD,
	HorizonError,
	ModelParams,
	TimePoint,
	conformal_time,
	eta_value,
	expansion_factor,
	time_point,
)

__all__ = [
	"ModelParams",
	"TimePoint",
	"HorizonError",
	"HORIZON_GUARD",
	"time_point",
	"eta_value",
	"conformal_time",
	"expansion_factor",
	"evolution_factor",
	"evolution_factors",
	"evolution_factor_asymptotic",
	"fundamental_solution",
	"evolution_factor_ode",
	"ode_converged",
	"ConvergenceResult",
	"StepError",
]
