"""Run configuration for sphdiff.

Values are layered: dataclass defaults, then an optional JSON file, then
SPHDIFF_* environment variables, then command-line flags. Defaults use the
dimensionless convention c = D = r = eta_inf = 1.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import structlog

from sphdiff.field import GRID_KINDS, MAX_GRID_POINTS, SphericalGrid
from sphdiff.model import ModelParams, TimePoint, conformal_time, time_point
from sphdiff.model.ode import DEFAULT_STEP
from sphdiff.spectrum import BUILTIN_SPECTRA, AngularSpectrum, builtin_spectrum, load_spectrum
from sphdiff.spectrum.covariance import MIN_RESOLUTION

OUTPUT_FORMATS = ("text", "parquet", "h5")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class ModelConfig:
	"""Physical constants; cosmological_constant, when set, replaces eta_inf."""

	c: float = 1.0
	D: float = 1.0
	r: float = 1.0
	eta_inf: float = 1.0
	cosmological_constant: float | None = None

	def to_params(self) -> ModelParams:
		if self.cosmological_constant is not None:
			return ModelParams.from_cosmological_constant(self.c, self.D, self.r, self.cosmological_constant)
		return ModelParams(c=self.c, D=self.D, r=self.r, eta_inf=self.eta_inf)


@dataclass
class TimeConfig:
	"""Exactly one of eta (conformal) or t (physical) is set."""

	eta: float | None = 0.001
	t: float | None = None

	def resolve(self, params: ModelParams) -> TimePoint:
		if self.t is not None:
			return conformal_time(params, self.t)
		return time_point(params, self.eta if self.eta is not None else 0.0)


@dataclass
class SpectrumConfig:
	path: Path | None = None  # overrides builtin
	builtin: str = "cmb_like"
	lmax: int = 256  # cap for file spectra
	amplitude: float = 1.0
	index: float = 3.0  # power_law only

	def load(self) -> AngularSpectrum:
		if self.path is not None:
			spectrum = load_spectrum(self.path)
			if spectrum.lmax > self.lmax:
				spectrum = spectrum.truncated(self.lmax)
			return spectrum
		return builtin_spectrum(self.builtin, self.lmax, self.amplitude, self.index)


@dataclass
class GridConfig:
	n_theta: int = 128
	n_phi: int = 256
	kind: str = "midpoint"
	max_points: int = MAX_GRID_POINTS

	def to_grid(self) -> SphericalGrid:
		return SphericalGrid(self.n_theta, self.n_phi, self.kind)  # type: ignore[arg-type]


@dataclass
class MonteCarloConfig:
	n_real: int = 300
	seed: int = 0
	workers: int = 1
	refine_count: int = 0


@dataclass
class BoundsConfig:
	K: float = 1.0  # Fernique constant, uncalibrated
	n_eps: int = 2000
	theta_resolution: int = 2000


@dataclass
class NumericsConfig:
	ode_step: float = DEFAULT_STEP
	ode_tol: float = 1e-8


@dataclass
class PathsConfig:
	out_dir: Path = field(default_factory=lambda: Path("out"))


@dataclass
class AppConfig:
	"""Complete run configuration."""

	model: ModelConfig = field(default_factory=ModelConfig)
	time: TimeConfig = field(default_factory=TimeConfig)
	spectrum: SpectrumConfig = field(default_factory=SpectrumConfig)
	grid: GridConfig = field(default_factory=GridConfig)
	monte_carlo: MonteCarloConfig = field(default_factory=MonteCarloConfig)
	bounds: BoundsConfig = field(default_factory=BoundsConfig)
	numerics: NumericsConfig = field(default_factory=NumericsConfig)
	paths: PathsConfig = field(default_factory=PathsConfig)
	output_format: str = "text"
	log_level: str = "WARNING"

	@classmethod
	def from_env(cls) -> AppConfig:
		"""Load configuration from environment variables."""
		return cls().apply_env()

	def apply_env(self) -> AppConfig:
		"""Overlay SPHDIFF_* environment variables onto this config."""
		# Model
		if c := os.environ.get("SPHDIFF_C"):
			self.model.c = float(c)
		if d := os.environ.get("SPHDIFF_D"):
			self.model.D = float(d)
		if r := os.environ.get("SPHDIFF_R"):
			self.model.r = float(r)
		if eta_inf := os.environ.get("SPHDIFF_ETA_INF"):
			self.model.eta_inf = float(eta_inf)
		if lam := os.environ.get("SPHDIFF_LAMBDA"):
			self.model.cosmological_constant = float(lam)

		# Time
		if eta := os.environ.get("SPHDIFF_ETA"):
			self.time.eta, self.time.t = float(eta), None
		if t := os.environ.get("SPHDIFF_T"):
			self.time.eta, self.time.t = None, float(t)

		# Spectrum and grid
		if path := os.environ.get("SPHDIFF_SPECTRUM"):
			self.spectrum.path = Path(path)
		if builtin := os.environ.get("SPHDIFF_BUILTIN"):
			self.spectrum.builtin = builtin
		if lmax := os.environ.get("SPHDIFF_LMAX"):
			self.spectrum.lmax = int(lmax)
		if grid := os.environ.get("SPHDIFF_GRID"):
			parsed = SphericalGrid.parse(grid)
			self.grid.n_theta, self.grid.n_phi = parsed.n_theta, parsed.n_phi

		# Monte Carlo and bounds
		if seed := os.environ.get("SPHDIFF_SEED"):
			self.monte_carlo.seed = int(seed)
		if workers := os.environ.get("SPHDIFF_WORKERS"):
			self.monte_carlo.workers = int(workers)
		if k := os.environ.get("SPHDIFF_K"):
			self.bounds.K = float(k)

		# Output
		if out_dir := os.environ.get("SPHDIFF_OUT_DIR"):
			self.paths.out_dir = Path(out_dir)
		if fmt := os.environ.get("SPHDIFF_FORMAT"):
			self.output_format = fmt
		self.log_level = os.environ.get("SPHDIFF_LOG_LEVEL", self.log_level)

		return self

	@classmethod
	def from_file(cls, path: str | Path) -> AppConfig:
		"""Load configuration from JSON file."""
		with open(path) as f:
			data = json.load(f)
		return cls._from_dict(data)

	@classmethod
	def _from_dict(cls, data: dict[str, Any]) -> AppConfig:
		"""Create config from dictionary; unknown keys are ignored."""
		config = cls()
		sections = ("model", "time", "spectrum", "grid", "monte_carlo", "bounds", "numerics", "paths")
		for name in sections:
			section = getattr(config, name)
			for key, value in data.get(name, {}).items():
				if hasattr(section, key):
					setattr(section, key, value)

		if config.spectrum.path is not None:
			config.spectrum.path = Path(config.spectrum.path)
		config.paths.out_dir = Path(config.paths.out_dir)
		if "t" in data.get("time", {}) and "eta" not in data.get("time", {}):
			config.time.eta = None
		config.output_format = data.get("output_format", config.output_format)
		config.log_level = data.get("log_level", config.log_level)
		return config

	@classmethod
	def load(cls, path: str | Path | None = None) -> AppConfig:
		"""Defaults, then the JSON file if given, then the environment."""
		config = cls.from_file(path) if path is not None else cls()
		return config.apply_env()

	def merge_overrides(self, overrides: dict[str, Any]) -> AppConfig:
		"""Apply dotted-key overrides such as {"model.c": 2.0}; None values are skipped."""
		for dotted, value in overrides.items():
			if value is None:
				continue
			section_name, _, key = dotted.rpartition(".")
			target = getattr(self, section_name) if section_name else self
			if not hasattr(target, key):
				raise KeyError(f"Unknown configuration key: {dotted}")
			setattr(target, key, value)
			if dotted == "time.t":
				self.time.eta = None
			elif dotted == "time.eta":
				self.time.t = None
		return self

	def ensure_dirs(self) -> None:
		"""Create the output directory if it doesn't exist."""
		self.paths.out_dir.mkdir(parents=True, exist_ok=True)

	def validate(self) -> list[str]:
		"""Validate all configuration values. Returns list of error messages."""
		errors = []

		# Model and time
		params = None
		try:
			params = self.model.to_params()
		except ValueError as e:
			errors.append(f"model: {e}")
		if (self.time.eta is None) == (self.time.t is None):
			errors.append("time: set exactly one of eta or t")
		elif params is not None:
			try:
				self.time.resolve(params)
			except ValueError as e:
				errors.append(f"time: {e}")

		# Spectrum
		if self.spectrum.path is not None and not Path(self.spectrum.path).exists():
			errors.append(f"spectrum.path ({self.spectrum.path}) does not exist")
		if self.spectrum.path is None and self.spectrum.builtin not in BUILTIN_SPECTRA:
			errors.append(f"spectrum.builtin ({self.spectrum.builtin}) must be one of {', '.join(BUILTIN_SPECTRA)}")
		if self.spectrum.lmax < 0:
			errors.append(f"spectrum.lmax ({self.spectrum.lmax}) must be >= 0")
		if self.spectrum.amplitude < 0:
			errors.append(f"spectrum.amplitude ({self.spectrum.amplitude}) must be >= 0")

		# Grid
		if self.grid.n_theta < 1 or self.grid.n_phi < 1:
			errors.append(f"grid ({self.grid.n_theta}x{self.grid.n_phi}) dimensions must be positive")
		elif self.grid.n_theta * self.grid.n_phi > self.grid.max_points:
			errors.append(
				f"grid ({self.grid.n_theta}x{self.grid.n_phi}) exceeds max_points ({self.grid.max_points})"
			)
		if self.grid.kind not in GRID_KINDS:
			errors.append(f"grid.kind ({self.grid.kind}) must be one of {', '.join(GRID_KINDS)}")

		# Monte Carlo
		if self.monte_carlo.n_real < 1:
			errors.append(f"monte_carlo.n_real ({self.monte_carlo.n_real}) must be >= 1")
		if self.monte_carlo.workers < 1:
			errors.append(f"monte_carlo.workers ({self.monte_carlo.workers}) must be >= 1")
		if self.monte_carlo.refine_count < 0:
			errors.append(f"monte_carlo.refine_count ({self.monte_carlo.refine_count}) must be >= 0")

		# Bounds
		if not self.bounds.K > 0:
			errors.append(f"bounds.K ({self.bounds.K}) must be positive")
		if self.bounds.n_eps < 1:
			errors.append(f"bounds.n_eps ({self.bounds.n_eps}) must be >= 1")
		if self.bounds.theta_resolution < MIN_RESOLUTION:
			errors.append(f"bounds.theta_resolution ({self.bounds.theta_resolution}) must be >= {MIN_RESOLUTION}")

		# Numerics and output
		if not self.numerics.ode_step > 0:
			errors.append(f"numerics.ode_step ({self.numerics.ode_step}) must be positive")
		if self.output_format not in OUTPUT_FORMATS:
			errors.append(f"output_format ({self.output_format}) must be one of {', '.join(OUTPUT_FORMATS)}")
		if self.log_level.upper() not in LOG_LEVELS:
			errors.append(f"log_level ({self.log_level}) must be one of {', '.join(LOG_LEVELS)}")

		return errors

	def to_dict(self) -> dict[str, Any]:
		"""JSON-safe view of every effective parameter."""
		data = asdict(self)
		data["spectrum"]["path"] = str(self.spectrum.path) if self.spectrum.path is not None else None
		data["paths"]["out_dir"] = str(self.paths.out_dir)
		return data


def configure_logging(level: str = "WARNING") -> None:
	"""Configure structured logging to stderr so that stdout stays clean for data."""
	log_level = getattr(logging, level.upper(), logging.WARNING)

	structlog.configure(
		processors=[
			structlog.stdlib.filter_by_level,
			structlog.stdlib.add_logger_name,
			structlog.stdlib.add_log_level,
			structlog.stdlib.PositionalArgumentsFormatter(),
			structlog.processors.TimeStamper(fmt="iso"),
			structlog.processors.StackInfoRenderer(),
			structlog.processors.format_exc_info,
			structlog.processors.UnicodeDecoder(),
			structlog.dev.ConsoleRenderer(),
		],
		wrapper_class=structlog.stdlib.BoundLogger,
		context_class=dict,
		logger_factory=structlog.stdlib.LoggerFactory(),
		cache_logger_on_first_use=True,
	)

	logging.basicConfig(
		format="%(message)s",
		stream=sys.stderr,
		level=log_level,
		force=True,
	)

	# Reduce noise from third-party libraries
	logging.getLogger("h5py").setLevel(logging.WARNING)
	logging.getLogger("numexpr").setLevel(logging.WARNING)
