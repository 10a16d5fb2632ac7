"""Legendre polynomials and associated Legendre functions.

Everything here is evaluated by three-term recurrences. The associated
functions carry the Condon-Shortley factor (-1)^m:

	P_l^m(x) = (-1)^m (1 - x^2)^(m/2) d^m/dx^m P_l(x)

The normalized table lambda_lm(x) = d_lm P_l^m(x), with
d_lm = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!), is built directly from its own
recurrence so that no factorials are ever formed.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sphdiff.special.bessel import DomainError


def _check_unit_interval(x: ArrayLike) -> NDArray[np.float64]:
	arr = np.asarray(x, dtype=np.float64)
	if np.any(np.abs(arr) > 1.0) or np.any(np.isnan(arr)):
		raise DomainError("Legendre argument must satisfy |x| <= 1")
	return arr


def _check_degree(l: int) -> int:
	if int(l) != l or l < 0:
		raise DomainError(f"Degree must be a nonnegative integer, got {l}")
	return int(l)


def legendre_table(lmax: int, x: ArrayLike) -> NDArray[np.float64]:
	"""P_0(x)..P_lmax(x) stacked along a new leading axis."""
	lmax = _check_degree(lmax)
	arr = _check_unit_interval(x)
	table = np.empty((lmax + 1,) + arr.shape, dtype=np.float64)
	table[0] = 1.0
	if lmax >= 1:
		table[1] = arr
	for l in range(2, lmax + 1):
		table[l] = ((2 * l - 1) * arr * table[l - 1] - (l - 1) * table[l - 2]) / l
	return table


def legendre_p(l: int, x: ArrayLike) -> float | NDArray[np.float64]:
	"""Legendre polynomial P_l(x)."""
	values = legendre_table(l, x)[l]
	if np.ndim(x) == 0:
		return float(values)
	return values


def assoc_legendre(l: int, m: int, x: ArrayLike) -> float | NDArray[np.float64]:
	"""Associated Legendre function P_l^m(x) with the (-1)^m convention.

	Starts from the diagonal P_m^m and recurses upward in l. Negative orders
	use P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
	"""
	l = _check_degree(l)
	if int(m) != m or abs(m) > l:
		raise DomainError(f"Order m={m} requires |m| <= l={l}")
	arr = _check_unit_interval(x)
	mm = abs(int(m))

	somx2 = np.sqrt((1.0 - arr) * (1.0 + arr))
	pmm = np.ones_like(arr)
	fact = 1.0
	for _ in range(mm):
		pmm = -pmm * fact * somx2
		fact += 2.0

	if l == mm:
		values = pmm
	else:
		pm1 = arr * (2 * mm + 1) * pmm
		if l == mm + 1:
			values = pm1
		else:
			prev, cur = pmm, pm1
			for ll in range(mm + 2, l + 1):
				prev, cur = cur, ((2 * ll - 1) * arr * cur - (ll + mm - 1) * prev) / (ll - mm)
			values = cur

	if m < 0:
		ratio = math.exp(math.lgamma(l - mm + 1) - math.lgamma(l + mm + 1))
		values = (-1) ** mm * ratio * values

	if np.ndim(x) == 0:
		return float(values)
	return values


def normalized_legendre_table(lmax: int, x: ArrayLike) -> NDArray[np.float64]:
	"""lambda_lm(x) = d_lm P_l^m(x) for 0 <= m <= l <= lmax.

	Returns an array indexed [m, l, ...x.shape]; entries with l < m are zero.
	"""
	lmax = _check_degree(lmax)
	arr = _check_unit_interval(x)
	somx2 = np.sqrt((1.0 - arr) * (1.0 + arr))

	table = np.zeros((lmax + 1, lmax + 1) + arr.shape, dtype=np.float64)
	table[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
	for m in range(1, lmax + 1):
		table[m, m] = -math.sqrt((2 * m + 1) / (2 * m)) * somx2 * table[m - 1, m - 1]
	for m in range(lmax):
		table[m, m + 1] = arr * math.sqrt(2 * m + 3) * table[m, m]

	expand = (slice(None),) + (np.newaxis,) * arr.ndim
	for l in range(2, lmax + 1):
		ms = np.arange(l - 1, dtype=np.float64)
		a = np.sqrt((4.0 * l * l - 1.0) / (l * l - ms * ms))
		b = np.sqrt(((l - 1.0) ** 2 - ms * ms) / (4.0 * (l - 1.0) ** 2 - 1.0))
		table[: l - 1, l] = a[expand] * (arr * table[: l - 1, l - 1] - b[expand] * table[: l - 1, l - 2])
	return table


def normalized_legendre_column(l: int, m: int, x: ArrayLike) -> NDArray[np.float64]:
	"""lambda_lm(x) for a single (l, m) with 0 <= m <= l."""
	arr = _check_unit_interval(x)
	somx2 = np.sqrt((1.0 - arr) * (1.0 + arr))

	lam = np.full(arr.shape, 1.0 / math.sqrt(4.0 * math.pi))
	for k in range(1, m + 1):
		lam = -math.sqrt((2 * k + 1) / (2 * k)) * somx2 * lam
	if l == m:
		return lam

	prev, cur = lam, arr * math.sqrt(2 * m + 3) * lam
	for ll in range(m + 2, l + 1):
		a = math.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
		b = math.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
		prev, cur = cur, a * (arr * cur - b * prev)
	return cur
