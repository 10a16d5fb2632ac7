"""Direct integration of the separated time equation.

	F'' + (eta_inf c^2 + D) / (D (eta_inf - eta)) F' + l(l+1) c^2 / r^2 F = 0,
	F(0) = 1, F'(0) = 0

Classical fixed-step Runge-Kutta of order four, vectorized over degrees.
This path never touches the Bessel kernel, so it serves as an independent
oracle for the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from sphdiff.model.params import ModelParams, TimePoint, eta_value

logger = structlog.get_logger(__name__)

MIN_STEPS = 1000
DEFAULT_STEP = 1e-4


class StepError(ValueError):
	"""Raised for a nonpositive integration step."""
	pass


def _integrate(params: ModelParams, l: NDArray[np.float64], eta: float, n_steps: int) -> NDArray[np.float64]:
	if eta == 0.0:
		return np.ones_like(l)

	damping = (params.eta_inf * params.c**2 + params.D) / params.D
	stiffness = l * (l + 1.0) * params.c**2 / params.r**2
	h = eta / n_steps
	h2 = 0.5 * h

	def rhs(t: float, f: NDArray, g: NDArray) -> tuple[NDArray, NDArray]:
		return g, -damping / (params.eta_inf - t) * g - stiffness * f

	f = np.ones_like(l)
	g = np.zeros_like(l)
	t = 0.0
	for i in range(n_steps):
		k1f, k1g = rhs(t, f, g)
		k2f, k2g = rhs(t + h2, f + h2 * k1f, g + h2 * k1g)
		k3f, k3g = rhs(t + h2, f + h2 * k2f, g + h2 * k2g)
		k4f, k4g = rhs(t + h, f + h * k3f, g + h * k3g)
		f = f + h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
		g = g + h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
		t = (i + 1) * h
	return f


def _degrees(l: ArrayLike) -> NDArray[np.float64]:
	l_arr = np.asarray(l, dtype=np.float64)
	if np.any(l_arr < 1) or not np.all(np.mod(l_arr, 1) == 0):
		raise ValueError("Degrees for the ODE oracle must be integers >= 1")
	return l_arr


def _steps_for(eta: float, step: float) -> int:
	if not step > 0:
		raise StepError(f"Integration step ({step}) must be positive")
	return max(MIN_STEPS, math.ceil(eta / step))


def evolution_factor_ode(
	params: ModelParams,
	l: ArrayLike,
	eta: float | TimePoint,
	step: float = DEFAULT_STEP,
) -> float | NDArray[np.float64]:
	"""F_l(eta) by RK4; the step is shrunk if needed to give MIN_STEPS steps on [0, eta]."""
	value = eta_value(params, eta)
	n_steps = _steps_for(value, step)
	l_arr = _degrees(l)
	result = _integrate(params, l_arr.reshape(-1), value, n_steps).reshape(l_arr.shape)
	if np.ndim(l) == 0:
		return float(result)
	return result


@dataclass
class ConvergenceResult:
	"""Outcome of step halving for the ODE oracle."""

	values: NDArray[np.float64]
	step: float
	n_steps: int
	converged: bool
	differences: list[float] = field(default_factory=list)


def ode_converged(
	params: ModelParams,
	l: ArrayLike,
	eta: float | TimePoint,
	step: float = DEFAULT_STEP,
	tol: float = 1e-8,
	max_halvings: int = 8,
) -> ConvergenceResult:
	"""Halve the step until successive RK4 answers agree to tol."""
	value = eta_value(params, eta)
	l_arr = np.atleast_1d(_degrees(l))
	n_steps = _steps_for(value, step)

	previous = _integrate(params, l_arr, value, n_steps)
	differences: list[float] = []
	for _ in range(max_halvings):
		n_steps *= 2
		current = _integrate(params, l_arr, value, n_steps)
		diff = float(np.max(np.abs(current - previous)))
		differences.append(diff)
		previous = current
		if diff <= tol:
			return ConvergenceResult(current, value / n_steps, n_steps, True, differences)

	logger.warning("ode_not_converged", eta=value, n_steps=n_steps, last_diff=differences[-1] if differences else None)
	return ConvergenceResult(previous, value / n_steps, n_steps, False, differences)
