"""Synthesis and analysis of band-limited fields on (theta, phi) grids.

Grid conventions:

	midpoint: theta_i = (i + 1/2) pi / n_theta
	gauss:    theta_i = arccos of the Gauss-Legendre nodes, ascending in theta
	phi_j = 2 pi j / n_phi

Synthesis sums the series directly. With lambda_lm the normalized Legendre
table,

	g_m(theta) = sum_l a_lm lambda_lm(cos theta)
	u(theta, phi) = g_0(theta) + 2 Re sum_{m>0} g_m(theta) exp(i m phi)

which is the full sum over -l..l folded with the conjugate symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from sphdiff.field.coefficients import HarmonicCoefficients
from sphdiff.special import DomainError, normalized_legendre_table

logger = structlog.get_logger(__name__)

GridKind = Literal["midpoint", "gauss"]
GRID_KINDS: tuple[str, ...] = ("midpoint", "gauss")
MAX_GRID_POINTS = 4_000_000


class ResourceLimitError(RuntimeError):
	"""Grid larger than the configured point cap."""
	pass


def fejer_weights(n: int) -> NDArray[np.float64]:
	"""Fejer first-rule weights for the midpoint nodes cos((i + 1/2) pi / n) on [-1, 1]."""
	theta = (np.arange(n) + 0.5) * math.pi / n
	k = np.arange(1, n // 2 + 1)
	series = np.cos(2.0 * np.outer(theta, k)) / (4.0 * k * k - 1.0)
	return (2.0 / n) * (1.0 - 2.0 * series.sum(axis=1))


@dataclass(frozen=True)
class SphericalGrid:
	n_theta: int
	n_phi: int
	kind: GridKind = "midpoint"

	def __post_init__(self) -> None:
		if self.n_theta < 1 or self.n_phi < 1:
			raise ValueError(f"Grid dimensions must be positive, got {self.n_theta}x{self.n_phi}")
		if self.kind not in GRID_KINDS:
			raise ValueError(f"Unknown grid kind {self.kind!r}; choose from {', '.join(GRID_KINDS)}")

	@classmethod
	def parse(cls, text: str, kind: GridKind = "midpoint") -> SphericalGrid:
		"""Grid from an 'NTHETAxNPHI' string."""
		try:
			n_theta, n_phi = (int(part) for part in text.lower().split("x"))
		except ValueError:
			raise ValueError(f"Grid must look like NTHETAxNPHI, got {text!r}") from None
		return cls(n_theta, n_phi, kind)

	@property
	def size(self) -> int:
		return self.n_theta * self.n_phi

	@cached_property
	def _nodes(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
		if self.kind == "gauss":
			x, w = np.polynomial.legendre.leggauss(self.n_theta)
			return np.arccos(x[::-1]), w[::-1].copy()
		theta = (np.arange(self.n_theta) + 0.5) * math.pi / self.n_theta
		return theta, fejer_weights(self.n_theta)

	@property
	def theta(self) -> NDArray[np.float64]:
		return self._nodes[0]

	@property
	def weights(self) -> NDArray[np.float64]:
		"""Quadrature weights in cos(theta)."""
		return self._nodes[1]

	@property
	def phi(self) -> NDArray[np.float64]:
		return 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi

	def exact_degree(self) -> int:
		"""Largest lmax whose analysis on this grid is exact."""
		theta_limit = self.n_theta - 1 if self.kind == "gauss" else (self.n_theta - 1) // 2
		return min(theta_limit, (self.n_phi - 1) // 2)

	def integrate(self, values: ArrayLike) -> float:
		"""Quadrature of n_theta x n_phi samples over the sphere."""
		arr = np.asarray(values, dtype=np.float64)
		if arr.shape != (self.n_theta, self.n_phi):
			raise ValueError(f"Expected values of shape {(self.n_theta, self.n_phi)}, got {arr.shape}")
		return float(self.weights @ arr.sum(axis=1)) * 2.0 * math.pi / self.n_phi


@dataclass(frozen=True)
class FieldMap:
	grid: SphericalGrid
	values: NDArray[np.float64]
	eta: float = 0.0

	def __post_init__(self) -> None:
		values = np.asarray(self.values, dtype=np.float64)
		if values.shape != (self.grid.n_theta, self.grid.n_phi):
			raise ValueError(f"Map shape {values.shape} does not match grid {self.grid.n_theta}x{self.grid.n_phi}")
		if not np.all(np.isfinite(values)):
			raise ValueError("Map values must be finite")
		object.__setattr__(self, "values", values)

	def max(self) -> float:
		return float(np.max(self.values))

	def abs_max(self) -> float:
		return float(np.max(np.abs(self.values)))


def _fold_orders(g: NDArray[np.complex128], phi: NDArray[np.float64]) -> NDArray[np.float64]:
	"""g_0 + 2 Re sum_{m>0} g_m exp(i m phi) for g indexed [m, ...]; phi broadcasts against g[0]."""
	lmax = g.shape[0] - 1
	values = g[0].real.copy()
	if lmax > 0:
		m = np.arange(1, lmax + 1).reshape((-1,) + (1,) * np.ndim(phi))
		values = values + 2.0 * np.sum((g[1:] * np.exp(1j * m * phi)).real, axis=0)
	return values


class Synthesizer:
	"""Direct synthesis on a fixed grid; the Legendre table is built once and reused."""

	def __init__(self, grid: SphericalGrid, lmax: int, max_points: int = MAX_GRID_POINTS) -> None:
		if grid.size > max_points:
			raise ResourceLimitError(f"Grid {grid.n_theta}x{grid.n_phi} exceeds the cap of {max_points} points")
		if grid.n_theta < lmax + 1 or grid.n_phi < 2 * lmax + 1:
			logger.warning(
				"grid_aliasing", n_theta=grid.n_theta, n_phi=grid.n_phi, lmax=lmax,
				recommended=f"{lmax + 1}x{2 * lmax + 1}",
			)
		self.grid = grid
		self.lmax = lmax
		self._table = normalized_legendre_table(lmax, np.cos(grid.theta))
		m = np.arange(lmax + 1)
		self._phase = np.exp(1j * np.outer(m[1:], grid.phi))
		logger.debug("synthesizer_init", n_theta=grid.n_theta, n_phi=grid.n_phi, lmax=lmax)

	def __call__(self, coefficients: HarmonicCoefficients, eta: float = 0.0) -> FieldMap:
		if coefficients.lmax != self.lmax:
			raise ValueError(f"Synthesizer built for lmax={self.lmax}, got coefficients with lmax={coefficients.lmax}")
		g = np.einsum("lm,mli->mi", coefficients.values, self._table)
		values = g[0].real[:, np.newaxis] + 2.0 * (g[1:].T @ self._phase).real
		return FieldMap(self.grid, values, eta)


def synthesize(
	coefficients: HarmonicCoefficients,
	n_theta: int,
	n_phi: int,
	kind: GridKind = "midpoint",
	eta: float = 0.0,
	max_points: int = MAX_GRID_POINTS,
) -> FieldMap:
	"""Map of sum_{l,m} a_lm Y_lm on an n_theta x n_phi grid."""
	grid = SphericalGrid(n_theta, n_phi, kind)
	return Synthesizer(grid, coefficients.lmax, max_points)(coefficients, eta)


def evaluate_points(coefficients: HarmonicCoefficients, theta: ArrayLike, phi: ArrayLike) -> NDArray[np.float64]:
	"""Field values at scattered points."""
	theta_arr = np.atleast_1d(np.asarray(theta, dtype=np.float64))
	phi_arr = np.atleast_1d(np.asarray(phi, dtype=np.float64))
	if theta_arr.shape != phi_arr.shape:
		raise ValueError("theta and phi must have the same shape")
	if np.any(theta_arr < 0) or np.any(theta_arr > math.pi) or np.any(np.isnan(theta_arr)):
		raise DomainError("theta must lie in [0, pi]")
	if not np.all(np.isfinite(phi_arr)):
		raise DomainError("phi must be finite")
	table = normalized_legendre_table(coefficients.lmax, np.cos(theta_arr.ravel()))
	g = np.einsum("lm,mlp->mp", coefficients.values, table)
	return _fold_orders(g, phi_arr.ravel()).reshape(theta_arr.shape)


def evaluate_point(coefficients: HarmonicCoefficients, theta: float, phi: float) -> float:
	if not 0.0 <= phi < 2.0 * math.pi:
		raise DomainError(f"phi ({phi}) must lie in [0, 2 pi)")
	return float(evaluate_points(coefficients, theta, phi)[0])


def integrate(field_map: FieldMap) -> float:
	"""Integral of the map over the unit sphere."""
	return field_map.grid.integrate(field_map.values)


def analyze(field_map: FieldMap, lmax: int) -> HarmonicCoefficients:
	"""Coefficients a_lm = integral of u conj(Y_lm) by quadrature on the map's grid.

	Exact for band-limited maps with lmax <= grid.exact_degree().
	"""
	grid = field_map.grid
	if 2 * lmax + 1 > grid.n_phi:
		raise ValueError(f"n_phi ({grid.n_phi}) must be at least 2*lmax+1 = {2 * lmax + 1}")
	if lmax > grid.exact_degree():
		logger.warning("analysis_not_exact", lmax=lmax, exact_degree=grid.exact_degree(), kind=grid.kind)

	fourier = np.fft.rfft(field_map.values, axis=1)[:, : lmax + 1] * (2.0 * math.pi / grid.n_phi)
	table = normalized_legendre_table(lmax, np.cos(grid.theta))
	values = np.einsum("mli,im->lm", table, grid.weights[:, np.newaxis] * fourier)
	values[:, 0] = values[:, 0].real
	return HarmonicCoefficients(np.tril(values))
