"""Bessel functions of the first and second kind for real order.

J_nu is evaluated by scipy's Cephes/AMOS kernels, which switch between the
power series (small argument), recurrence and Hankel asymptotics (large
argument) internally. Y_nu is assembled here from J so that the
near-integer limit is handled explicitly:

- noninteger order: reflection formula (J_nu cos(nu pi) - J_-nu) / sin(nu pi)
- |nu - round(nu)| < INTEGER_ORDER_TOL: integer-order routine at round(nu)

The reflection formula loses all precision as sin(nu pi) -> 0, which is why
orders within the tolerance are snapped to the integer.
"""

from __future__ import annotations

import math

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy import special as sp_special

logger = structlog.get_logger(__name__)

MIN_ORDER = -0.5
INTEGER_ORDER_TOL = 1e-6


class DomainError(ValueError):
	"""Raised when an argument lies outside a special function's domain."""
	pass


def _check_order(nu: float) -> float:
	nu = float(nu)
	if not math.isfinite(nu):
		raise DomainError(f"Order must be finite, got {nu}")
	if nu < MIN_ORDER:
		raise DomainError(f"Order {nu} below minimum {MIN_ORDER}")
	return nu


def _unwrap(value: NDArray, like: ArrayLike) -> float | NDArray:
	if np.ndim(like) == 0:
		return float(value)
	return value


def bessel_j(nu: float, x: ArrayLike) -> float | NDArray[np.float64]:
	"""Bessel function of the first kind J_nu(x) for nu >= -1/2 and x >= 0."""
	nu = _check_order(nu)
	arr = np.asarray(x, dtype=np.float64)
	if np.any(arr < 0) or np.any(np.isnan(arr)):
		raise DomainError("bessel_j requires x >= 0")
	return _unwrap(sp_special.jv(nu, arr), x)


def bessel_y(nu: float, x: ArrayLike) -> float | NDArray[np.float64]:
	"""Bessel function of the second kind Y_nu(x) for nu >= -1/2 and x > 0."""
	nu = _check_order(nu)
	arr = np.asarray(x, dtype=np.float64)
	if np.any(arr <= 0) or np.any(np.isnan(arr)):
		raise DomainError("bessel_y requires x > 0")

	n = round(nu)
	if abs(nu - n) < INTEGER_ORDER_TOL:
		if nu != n:
			logger.debug("bessel_y_integer_limit", nu=nu, snapped=n)
		values = sp_special.yn(int(n), arr)
	else:
		angle = nu * math.pi
		values = (sp_special.jv(nu, arr) * math.cos(angle) - sp_special.jv(-nu, arr)) / math.sin(angle)
	return _unwrap(values, x)
