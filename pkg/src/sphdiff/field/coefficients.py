"""Harmonic coefficients a_lm of a real isotropic Gaussian field.

Only m >= 0 is stored, as a complex array indexed [l, m] with zeros above
the diagonal. Negative orders follow from a_{l,-m} = (-1)^m conj(a_lm).

Sampling draws (lmax + 1)^2 normals from the seeded stream in l-major order:
for each l, first a_l0, then x and y for m = 1..l. Degrees with C_l = 0
still consume their draws so that a coefficient never depends on other
degrees' spectrum values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from sphdiff.field.rng import GaussianStream
from sphdiff.model import ModelParams, TimePoint, evolution_factors
from sphdiff.spectrum import AngularSpectrum
from sphdiff.storage import write_table

logger = structlog.get_logger(__name__)

COEFFICIENT_COLUMNS = ("l", "m", "re", "im")


class CoefficientFormatError(ValueError):
	"""Malformed coefficient file; line is the 1-based line number when known."""

	def __init__(self, message: str, line: int | None = None) -> None:
		super().__init__(f"line {line}: {message}" if line is not None else message)
		self.line = line


@dataclass(frozen=True)
class HarmonicCoefficients:
	"""a_lm for 0 <= m <= l <= lmax."""

	values: NDArray[np.complex128]

	def __post_init__(self) -> None:
		values = np.array(self.values, dtype=np.complex128, copy=True)
		if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] == 0:
			raise ValueError(f"Coefficients must be a square [l, m] array, got shape {values.shape}")
		if not np.all(np.isfinite(values)):
			raise ValueError("Coefficients must be finite")
		if np.any(np.triu(values, k=1) != 0):
			raise ValueError("Coefficients with m > l must be zero")
		if np.any(values[:, 0].imag != 0):
			raise ValueError("a_l0 must be real")
		values.setflags(write=False)
		object.__setattr__(self, "values", values)

	@classmethod
	def zeros(cls, lmax: int) -> HarmonicCoefficients:
		return cls(np.zeros((lmax + 1, lmax + 1), dtype=np.complex128))

	@property
	def lmax(self) -> int:
		return self.values.shape[0] - 1

	def __getitem__(self, index: tuple[int, int]) -> complex:
		l, m = index
		if not 0 <= l <= self.lmax or abs(m) > l:
			raise IndexError(f"(l={l}, m={m}) outside 0 <= |m| <= l <= {self.lmax}")
		if m >= 0:
			return complex(self.values[l, m])
		return complex((-1) ** m * np.conj(self.values[l, -m]))

	def scaled_by_degree(self, factors: NDArray[np.float64]) -> HarmonicCoefficients:
		"""a_lm -> f_l a_lm for real f_l."""
		return HarmonicCoefficients(self.values * np.asarray(factors, dtype=np.float64)[:, np.newaxis])


def sample_coefficients(spec: AngularSpectrum, seed: int) -> HarmonicCoefficients:
	"""a_l0 ~ N(0, C_l); a_lm = (x + iy)/sqrt(2) with x, y ~ N(0, C_l) for m > 0."""
	lmax = spec.lmax
	z = GaussianStream(seed).normals((lmax + 1) ** 2)

	l_idx, m_idx = np.tril_indices(lmax + 1)
	offset = l_idx * l_idx
	std = np.sqrt(spec.cl)[l_idx]

	real_pos = np.where(m_idx == 0, offset, offset + 2 * m_idx - 1)
	imag_pos = offset + 2 * m_idx
	re = z[real_pos]
	im = np.where(m_idx == 0, 0.0, z[imag_pos])
	scale = np.where(m_idx == 0, std, std / math.sqrt(2.0))

	values = np.zeros((lmax + 1, lmax + 1), dtype=np.complex128)
	values[l_idx, m_idx] = scale * (re + 1j * im)
	return HarmonicCoefficients(values)


def evolve_coefficients(
	coefficients: HarmonicCoefficients, params: ModelParams, eta: float | TimePoint
) -> HarmonicCoefficients:
	"""a_lm -> F_l(eta) a_lm."""
	return coefficients.scaled_by_degree(evolution_factors(params, coefficients.lmax, eta))


def tail_coefficients(coefficients: HarmonicCoefficients, L: int) -> HarmonicCoefficients:
	"""Coefficients of the truncation error field: degrees l <= L set to zero."""
	if L < -1:
		raise ValueError(f"Truncation degree L ({L}) must be >= -1")
	keep = (np.arange(coefficients.lmax + 1) > L).astype(np.float64)
	return coefficients.scaled_by_degree(keep)


def empirical_spectrum(coefficients: HarmonicCoefficients) -> AngularSpectrum:
	"""C^_l = (2l+1)^-1 sum_{m=-l..l} |a_lm|^2."""
	power = np.abs(coefficients.values) ** 2
	total = power[:, 0] + 2.0 * np.sum(power[:, 1:], axis=1)
	return AngularSpectrum(total / (2.0 * np.arange(coefficients.lmax + 1) + 1.0))


def save_coefficients(coefficients: HarmonicCoefficients, path: str | Path) -> Path:
	l_idx, m_idx = np.tril_indices(coefficients.lmax + 1)
	values = coefficients.values[l_idx, m_idx]
	return write_table(path, {"l": l_idx, "m": m_idx, "re": values.real, "im": values.imag})


def _parse_float(raw: str, name: str, line: int) -> float:
	try:
		value = float(raw.strip())
	except (AttributeError, ValueError):
		raise CoefficientFormatError(f"cannot parse {name!r} value {raw!r}", line=line) from None
	if not math.isfinite(value):
		raise CoefficientFormatError(f"non-finite {name!r} value {raw!r}", line=line)
	return value


def load_coefficients(path: str | Path) -> HarmonicCoefficients:
	"""Read a coefficient file: rows for m >= 0, l ascending then m ascending."""
	path = Path(path)
	if not path.exists():
		raise FileNotFoundError(f"Coefficient file not found: {path}")
	try:
		frame = pd.read_csv(path, dtype=str, skip_blank_lines=False, keep_default_na=False, encoding="utf-8")
	except pd.errors.ParserError as e:
		match = re.search(r"line (\d+)", str(e))
		raise CoefficientFormatError(str(e), line=int(match.group(1)) if match else None) from e
	except pd.errors.EmptyDataError as e:
		raise CoefficientFormatError("empty coefficient file", line=1) from e

	columns = tuple(c.strip() for c in frame.columns)
	if columns != COEFFICIENT_COLUMNS:
		raise CoefficientFormatError(
			f"expected header {','.join(COEFFICIENT_COLUMNS)}, got {','.join(columns)}", line=1
		)
	if frame.empty:
		raise CoefficientFormatError("no coefficient rows", line=2)

	# parsed before the shape check, errors keep their file line
	rows = [
		tuple(_parse_float(raw, name, row + 2) for raw, name in zip(record, COEFFICIENT_COLUMNS))
		for row, record in enumerate(frame.itertuples(index=False))
	]

	n_rows = len(rows)
	lmax = int(round((math.sqrt(8 * n_rows + 1) - 3) / 2))
	if (lmax + 1) * (lmax + 2) // 2 != n_rows:
		raise CoefficientFormatError(f"{n_rows} rows do not form a complete triangle 0 <= m <= l")
	expected_l, expected_m = np.tril_indices(lmax + 1)

	values = np.zeros((lmax + 1, lmax + 1), dtype=np.complex128)
	for row, (l, m, re_part, im_part) in enumerate(rows):
		line = row + 2
		if (l, m) != (expected_l[row], expected_m[row]):
			raise CoefficientFormatError(
				f"expected (l={expected_l[row]}, m={expected_m[row]}), found (l={l:g}, m={m:g})", line=line
			)
		if m == 0 and im_part != 0:
			raise CoefficientFormatError(f"a_{int(l)},0 must be real, got im={im_part}", line=line)
		values[int(l), int(m)] = complex(re_part, im_part)

	coefficients = HarmonicCoefficients(values)
	logger.info("coefficients_loaded", path=str(path), lmax=lmax)
	return coefficients
