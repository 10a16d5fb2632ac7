"""Monte Carlo distribution of the grid supremum of the evolved field.

Realization i uses seed + i, so a run is reproducible and independent of the
number of worker threads. The sphere supremum is approximated by the grid
maximum; a refinement report compares it against a grid twice as fine.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from sphdiff.field import (
	MAX_GRID_POINTS,
	FieldMap,
	SphericalGrid,
	Synthesizer,
	realization_seed,
	sample_coefficients,
)
from sphdiff.field.synthesis import GridKind
from sphdiff.model import ModelParams, TimePoint, eta_value, evolution_factors
from sphdiff.spectrum import AngularSpectrum

logger = structlog.get_logger(__name__)

REFINEMENT_FACTOR = 2


@dataclass(frozen=True)
class RefinementReport:
	"""Grid-sup bias estimate from the first ``count`` realizations."""

	factor: int
	count: int
	coarse_mean: float
	fine_mean: float

	@property
	def relative_shift(self) -> float:
		if self.coarse_mean == 0.0:
			return 0.0 if self.fine_mean == 0.0 else math.inf
		return (self.fine_mean - self.coarse_mean) / abs(self.coarse_mean)


@dataclass
class SupSample:
	values: NDArray[np.float64]
	eta: float
	seed: int
	n_theta: int
	n_phi: int
	lmax: int
	absolute: bool = False
	tail_from: int | None = None
	refinement: RefinementReport | None = None
	maps: list[FieldMap] = field(default_factory=list, repr=False)

	def __post_init__(self) -> None:
		self.values = np.asarray(self.values, dtype=np.float64)
		if self.values.ndim != 1 or self.values.size == 0:
			raise ValueError("A sup sample needs at least one value")
		if not np.all(np.isfinite(self.values)):
			raise ValueError("Sup sample values must be finite")

	@property
	def n(self) -> int:
		return int(self.values.size)

	@property
	def mean(self) -> float:
		return float(np.mean(self.values))

	@property
	def median(self) -> float:
		return float(np.median(self.values))

	@property
	def std(self) -> float:
		return float(np.std(self.values, ddof=1)) if self.n > 1 else 0.0

	@property
	def stderr(self) -> float:
		return self.std / math.sqrt(self.n)

	@property
	def skewness(self) -> float:
		return float(stats.skew(self.values)) if self.n > 2 else 0.0

	def summary(self) -> dict[str, Any]:
		result: dict[str, Any] = {
			"n": self.n,
			"mean": self.mean,
			"median": self.median,
			"std": self.std,
			"stderr": self.stderr,
			"skew": self.skewness,
			"min": float(np.min(self.values)),
			"max": float(np.max(self.values)),
		}
		if self.refinement is not None:
			result["refine_count"] = self.refinement.count
			result["refine_relative_shift"] = self.refinement.relative_shift
		return result

	def header(self) -> dict[str, Any]:
		"""Key/value metadata for sample files."""
		return {
			"seed": self.seed,
			"grid": f"{self.n_theta}x{self.n_phi}",
			"eta": self.eta,
			"lmax": self.lmax,
			"absolute": self.absolute,
			"tail_from": self.tail_from if self.tail_from is not None else "none",
		}


@dataclass(frozen=True)
class ExceedanceCurve:
	"""Empirical P(sup > x) with binomial standard errors."""

	x: NDArray[np.float64]
	probability: NDArray[np.float64]
	stderr: NDArray[np.float64]


def exceedance_curve(sample: SupSample | ArrayLike, xs: ArrayLike) -> ExceedanceCurve:
	values = sample.values if isinstance(sample, SupSample) else np.asarray(sample, dtype=np.float64)
	x = np.asarray(xs, dtype=np.float64)
	sorted_values = np.sort(values)
	above = values.size - np.searchsorted(sorted_values, x, side="right")
	probability = above / values.size
	stderr = np.sqrt(probability * (1.0 - probability) / values.size)
	return ExceedanceCurve(x=x, probability=probability, stderr=stderr)


def mc_sup_distribution(
	spec: AngularSpectrum,
	params: ModelParams,
	eta: float | TimePoint,
	n_real: int,
	n_theta: int,
	n_phi: int,
	seed: int = 0,
	*,
	kind: GridKind = "midpoint",
	tail_from: int | None = None,
	absolute: bool = False,
	refine_count: int = 0,
	workers: int = 1,
	keep_maps: bool = False,
	max_points: int = MAX_GRID_POINTS,
) -> SupSample:
	"""Sample, evolve to eta, synthesize and take the grid maximum, n_real times.

	tail_from=L keeps only degrees l > L (the truncation error field u - u_L).
	absolute=True records max |u| instead of max u.
	"""
	if n_real < 1:
		raise ValueError(f"n_real ({n_real}) must be >= 1")
	if workers < 1:
		raise ValueError(f"workers ({workers}) must be >= 1")
	refine_count = min(max(refine_count, 0), n_real)
	value = eta_value(params, eta)

	factors = evolution_factors(params, spec.lmax, value)
	if tail_from is not None:
		factors = np.where(spec.degrees > tail_from, factors, 0.0)

	grid = SphericalGrid(n_theta, n_phi, kind)
	synth = Synthesizer(grid, spec.lmax, max_points)
	fine = None
	if refine_count:
		fine_grid = SphericalGrid(REFINEMENT_FACTOR * n_theta, REFINEMENT_FACTOR * n_phi, kind)
		fine = Synthesizer(fine_grid, spec.lmax, max_points)

	def reduce(field_map: FieldMap) -> float:
		return field_map.abs_max() if absolute else field_map.max()

	def realize(i: int) -> tuple[float, float | None, FieldMap | None]:
		coefficients = sample_coefficients(spec, realization_seed(seed, i)).scaled_by_degree(factors)
		field_map = synth(coefficients, value)
		fine_sup = reduce(fine(coefficients, value)) if fine is not None and i < refine_count else None
		return reduce(field_map), fine_sup, field_map if keep_maps else None

	logger.info("mc_sup_start", n_real=n_real, grid=f"{n_theta}x{n_phi}", lmax=spec.lmax, eta=value, workers=workers)
	if workers == 1:
		results = [realize(i) for i in range(n_real)]
	else:
		with ThreadPoolExecutor(max_workers=workers) as pool:
			results = list(pool.map(realize, range(n_real)))

	sups = np.array([r[0] for r in results])
	refinement = None
	if refine_count:
		fine_sups = np.array([r[1] for r in results[:refine_count]], dtype=np.float64)
		refinement = RefinementReport(
			factor=REFINEMENT_FACTOR,
			count=refine_count,
			coarse_mean=float(np.mean(sups[:refine_count])),
			fine_mean=float(np.mean(fine_sups)),
		)

	sample = SupSample(
		values=sups,
		eta=value,
		seed=seed,
		n_theta=n_theta,
		n_phi=n_phi,
		lmax=spec.lmax,
		absolute=absolute,
		tail_from=tail_from,
		refinement=refinement,
		maps=[r[2] for r in results if r[2] is not None],
	)
	logger.info("mc_sup_done", **sample.summary())
	return sample
