"""Complex spherical harmonics Y_lm = d_lm exp(i m phi) P_l^m(cos theta)."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sphdiff.special.bessel import DomainError
from sphdiff.special.legendre import normalized_legendre_column


def sph_harm(l: int, m: int, theta: ArrayLike, phi: ArrayLike) -> complex | NDArray[np.complex128]:
	"""Orthonormal complex spherical harmonic Y_lm(theta, phi).

	Negative orders follow Y_{l,-m} = (-1)^m conj(Y_lm).
	"""
	if int(l) != l or l < 0:
		raise DomainError(f"Degree must be a nonnegative integer, got {l}")
	if int(m) != m or abs(m) > l:
		raise DomainError(f"Order m={m} requires |m| <= l={l}")
	theta_arr = np.asarray(theta, dtype=np.float64)
	phi_arr = np.asarray(phi, dtype=np.float64)
	if np.any(theta_arr < 0) or np.any(theta_arr > np.pi):
		raise DomainError("theta must lie in [0, pi]")

	mm = abs(int(m))
	lam = normalized_legendre_column(int(l), mm, np.cos(theta_arr))
	values = lam * np.exp(1j * mm * phi_arr)
	if m < 0:
		values = (-1) ** mm * np.conj(values)

	if np.ndim(values) == 0:
		return complex(values)
	return values


def angular_distance(
	theta1: ArrayLike, phi1: ArrayLike, theta2: ArrayLike, phi2: ArrayLike
) -> float | NDArray[np.float64]:
	"""Great-circle angle between two points, by the spherical law of cosines."""
	cos_d = np.cos(theta1) * np.cos(theta2) + np.sin(theta1) * np.sin(theta2) * np.cos(np.subtract(phi1, phi2))
	values = np.arccos(np.clip(cos_d, -1.0, 1.0))
	if np.ndim(values) == 0:
		return float(values)
	return values
