"""Model constants and the conformal-time mapping.

The diffusion runs on a sphere of radius r expanding with scale factor
a(t) = exp(t / eta_inf). In conformal time

	eta = eta_inf (1 - exp(-t / eta_inf)),   eta in [0, eta_inf)

the horizon eta_inf is never reached. Times within HORIZON_GUARD * eta_inf
of the horizon are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

HORIZON_GUARD = 1e-6


class HorizonError(ValueError):
	"""Raised for conformal times outside [0, eta_inf (1 - HORIZON_GUARD))."""
	pass


@dataclass(frozen=True)
class ModelParams:
	"""Signal speed c, diffusivity D, sphere radius r and horizon eta_inf."""

	c: float = 1.0
	D: float = 1.0
	r: float = 1.0
	eta_inf: float = 1.0

	def __post_init__(self) -> None:
		for name in ("c", "D", "r", "eta_inf"):
			value = getattr(self, name)
			if not math.isfinite(value) or value <= 0:
				raise ValueError(f"{name} ({value}) must be finite and positive")
		if not self.nu > 1.0:
			raise ValueError(f"Derived order nu ({self.nu}) must exceed 1")

	@classmethod
	def from_cosmological_constant(cls, c: float, D: float, r: float, cosmological_constant: float) -> ModelParams:
		"""Build parameters from Lambda via eta_inf = sqrt(3 / Lambda) / c."""
		if not cosmological_constant > 0:
			raise ValueError(f"cosmological_constant ({cosmological_constant}) must be positive")
		return cls(c=c, D=D, r=r, eta_inf=math.sqrt(3.0 / cosmological_constant) / c)

	@property
	def nu(self) -> float:
		"""Bessel order nu = c^2 eta_inf / (2D) + 1."""
		return self.c * self.c * self.eta_inf / (2.0 * self.D) + 1.0

	@property
	def eta_max(self) -> float:
		"""Guarded horizon; admissible conformal times lie strictly below it."""
		return self.eta_inf * (1.0 - HORIZON_GUARD)

	def z(self, l: ArrayLike) -> float | NDArray[np.float64]:
		"""Angular wave number z_l = c sqrt(l(l+1)) / r."""
		l_arr = np.asarray(l, dtype=np.float64)
		values = self.c * np.sqrt(l_arr * (l_arr + 1.0)) / self.r
		if np.ndim(l) == 0:
			return float(values)
		return values


@dataclass(frozen=True)
class TimePoint:
	"""A validated conformal time; t is kept when the point came from physical time."""

	eta: float
	t: float | None = None


def time_point(params: ModelParams, eta: float | TimePoint) -> TimePoint:
	"""Validate a conformal time against the horizon guard."""
	if isinstance(eta, TimePoint):
		point = eta
	else:
		point = TimePoint(eta=float(eta))
	if not math.isfinite(point.eta) or point.eta < 0:
		raise HorizonError(f"Conformal time {point.eta} must be finite and >= 0")
	if point.eta >= params.eta_max:
		raise HorizonError(
			f"Conformal time {point.eta} too close to the horizon eta_inf={params.eta_inf} "
			f"(guard {HORIZON_GUARD})"
		)
	return point


def eta_value(params: ModelParams, eta: float | TimePoint) -> float:
	return time_point(params, eta).eta


def conformal_time(params: ModelParams, t: float) -> TimePoint:
	"""Map physical time t >= 0 to conformal time."""
	if not t >= 0:
		raise HorizonError(f"Physical time {t} must be >= 0")
	eta = -params.eta_inf * math.expm1(-t / params.eta_inf)
	return time_point(params, TimePoint(eta=eta, t=float(t)))


def expansion_factor(params: ModelParams, eta: float | TimePoint) -> float:
	"""e(eta) = eta_inf / (eta_inf - eta), equal to the scale factor a(t)."""
	value = eta_value(params, eta)
	return params.eta_inf / (params.eta_inf - value)
