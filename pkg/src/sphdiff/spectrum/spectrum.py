"""Angular power spectra: the container, file I/O and built-in test spectra.

Spectrum files are UTF-8 text with header ``l,Cl`` and one row per
multipole, l contiguous from 0. Every sum over l is truncated at the file's
lmax: the tail beyond it is zero by definition.
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

from sphdiff.storage import write_table

logger = structlog.get_logger(__name__)

SPECTRUM_COLUMNS = ("l", "Cl")
BUILTIN_SPECTRA = ("cmb_like", "power_law", "flat")


class SpectrumFormatError(ValueError):
	"""Malformed spectrum file; line is the 1-based line number when known."""

	def __init__(self, message: str, line: int | None = None) -> None:
		super().__init__(f"line {line}: {message}" if line is not None else message)
		self.line = line


class SpectrumValidationError(ValueError):
	"""Parsed spectrum with a negative C_l or a gap in the multipoles."""

	def __init__(self, message: str, l: int | None = None) -> None:
		super().__init__(message)
		self.l = l


@dataclass(frozen=True)
class AngularSpectrum:
	"""Nonnegative C_0..C_lmax."""

	cl: NDArray[np.float64]

	def __post_init__(self) -> None:
		cl = np.array(self.cl, dtype=np.float64, copy=True)
		if cl.ndim != 1 or cl.size == 0:
			raise SpectrumValidationError("Spectrum must be a non-empty 1-D sequence")
		bad = np.flatnonzero(~np.isfinite(cl) | (cl < 0))
		if bad.size:
			l = int(bad[0])
			raise SpectrumValidationError(f"C_l must be finite and >= 0, got C_{l} = {cl[l]}", l=l)
		cl.setflags(write=False)
		object.__setattr__(self, "cl", cl)

	@property
	def lmax(self) -> int:
		return self.cl.size - 1

	@property
	def degrees(self) -> NDArray[np.int64]:
		return np.arange(self.cl.size)

	@property
	def multiplicity_weighted(self) -> NDArray[np.float64]:
		"""C_l (2l + 1)."""
		return self.cl * (2.0 * self.degrees + 1.0)

	@property
	def weighted_sum(self) -> float:
		"""sum_l C_l (2l + 1), finite at any finite lmax."""
		return float(np.sum(self.multiplicity_weighted))

	def scaled(self, factor: float) -> AngularSpectrum:
		return AngularSpectrum(self.cl * factor)

	def tail(self, L: int) -> AngularSpectrum:
		"""Spectrum of the harmonic tail l > L (entries l <= L zeroed)."""
		cl = self.cl.copy()
		cl[: max(L + 1, 0)] = 0.0
		return AngularSpectrum(cl)

	def truncated(self, lmax: int) -> AngularSpectrum:
		return AngularSpectrum(self.cl[: lmax + 1])


def _parse_column(frame: pd.DataFrame, name: str) -> NDArray[np.float64]:
	# float() is correctly rounded, so shortest-repr output reads back exactly
	values = np.empty(len(frame), dtype=np.float64)
	for row, raw in enumerate(frame[name]):
		try:
			value = float(raw.strip())
		except (AttributeError, ValueError):
			raise SpectrumFormatError(f"cannot parse {name!r} value {raw!r}", line=row + 2) from None
		if not math.isfinite(value):
			raise SpectrumFormatError(f"non-finite {name!r} value {raw!r}", line=row + 2)
		values[row] = value
	return values


def load_spectrum(path: str | Path) -> AngularSpectrum:
	"""Read and validate a spectrum file."""
	path = Path(path)
	if not path.exists():
		raise FileNotFoundError(f"Spectrum file not found: {path}")

	try:
		frame = pd.read_csv(path, dtype=str, skip_blank_lines=False, keep_default_na=False, encoding="utf-8")
	except pd.errors.ParserError as e:
		match = re.search(r"line (\d+)", str(e))
		raise SpectrumFormatError(str(e), line=int(match.group(1)) if match else None) from e
	except pd.errors.EmptyDataError as e:
		raise SpectrumFormatError("empty spectrum file", line=1) from e

	columns = tuple(c.strip() for c in frame.columns)
	if columns != SPECTRUM_COLUMNS:
		raise SpectrumFormatError(f"expected header {','.join(SPECTRUM_COLUMNS)}, got {','.join(columns)}", line=1)
	frame.columns = list(SPECTRUM_COLUMNS)
	if frame.empty:
		raise SpectrumFormatError("no multipole rows", line=2)

	degrees = _parse_column(frame, "l")
	cl = _parse_column(frame, "Cl")

	non_integer = np.flatnonzero(np.mod(degrees, 1) != 0)
	if non_integer.size:
		row = int(non_integer[0])
		raise SpectrumFormatError(f"multipole {degrees[row]} is not an integer", line=row + 2)
	gaps = np.flatnonzero(degrees != np.arange(degrees.size))
	if gaps.size:
		row = int(gaps[0])
		raise SpectrumValidationError(
			f"non-contiguous multipole: expected l={row}, found l={int(degrees[row])}", l=row
		)
	negative = np.flatnonzero(cl < 0)
	if negative.size:
		l = int(negative[0])
		raise SpectrumValidationError(f"negative C_l at l={l}: {cl[l]}", l=l)

	spectrum = AngularSpectrum(cl)
	logger.info("spectrum_loaded", path=str(path), lmax=spectrum.lmax)
	return spectrum


def save_spectrum(spectrum: AngularSpectrum, path: str | Path) -> Path:
	"""Write a spectrum file that load_spectrum reads back bit-exactly."""
	return write_table(path, {"l": spectrum.degrees, "Cl": spectrum.cl})


def builtin_spectrum(name: str, lmax: int, amplitude: float = 1.0, index: float = 3.0) -> AngularSpectrum:
	"""Deterministic test spectra.

	cmb_like: monopole and dipole removed; l(l+1)C_l/2pi is a Sachs-Wolfe
	plateau of height ``amplitude`` carrying damped acoustic peaks.
	power_law: C_l = amplitude / (l + 1)^index.
	flat: C_l = amplitude.
	"""
	if lmax < 0:
		raise ValueError(f"lmax ({lmax}) must be >= 0")
	if amplitude < 0:
		raise ValueError(f"amplitude ({amplitude}) must be >= 0")
	l = np.arange(lmax + 1, dtype=np.float64)

	if name == "cmb_like":
		peaks = (
			1.0
			+ 4.5 * np.exp(-(((l - 220.0) / 90.0) ** 2))
			+ 2.2 * np.exp(-(((l - 540.0) / 80.0) ** 2))
			+ 2.4 * np.exp(-(((l - 810.0) / 90.0) ** 2))
		)
		band_power = amplitude * peaks * np.exp(-((l / 1400.0) ** 2))
		cl = np.zeros_like(l)
		high = l >= 2
		cl[high] = 2.0 * math.pi * band_power[high] / (l[high] * (l[high] + 1.0))
	elif name == "power_law":
		cl = amplitude / (l + 1.0) ** index
	elif name == "flat":
		cl = np.full_like(l, amplitude)
	else:
		raise ValueError(f"Unknown spectrum {name!r}; choose from {', '.join(BUILTIN_SPECTRA)}")
	return AngularSpectrum(cl)
