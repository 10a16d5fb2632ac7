"""Command-line interface."""

from __future__ import annotations

import math
import sys
from pathlib import Path
from typing import Any

import click
import numpy as np
import structlog
from rich.console import Console
from rich.table import Table

from sphdiff import __version__
from sphdiff.config import LOG_LEVELS, OUTPUT_FORMATS, AppConfig, configure_logging
from sphdiff.field import (
	GRID_KINDS,
	SphericalGrid,
	evolve_coefficients,
	integrate,
	load_coefficients,
	sample_coefficients,
	save_coefficients,
	synthesize,
)
from sphdiff.model import ModelParams, TimePoint, evolution_factor, evolution_factors, ode_converged
from sphdiff.spectrum import (
	BUILTIN_SPECTRA,
	AngularSpectrum,
	ConditionKind,
	builtin_spectrum,
	cap_angles,
	check_condition,
	correlation,
	covariance_curve,
	covariance_surface,
	evolved_spectrum,
	pseudometric,
	save_spectrum,
	tail_variance,
	theta_grid,
	time_increment_norm,
	truncation_error,
	variance,
)
from sphdiff.storage import DataWriter, RunManifest, TimeSpec, create_writer, read_table

logger = structlog.get_logger(__name__)
console = Console()


def _floats(text: str) -> list[float]:
	"""Comma-separated floats."""
	try:
		return [float(part) for part in text.split(",") if part.strip()]
	except ValueError:
		raise click.BadParameter(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
	"""Comma-separated integers; 'a-b' expands to the inclusive range."""
	values: list[int] = []
	try:
		for part in text.split(","):
			part = part.strip()
			if not part:
				continue
			dash = part.find("-", 1)
			if dash > 0:
				values.extend(range(int(part[:dash]), int(part[dash + 1 :]) + 1))
			else:
				values.append(int(part))
	except ValueError:
		raise click.BadParameter(f"expected comma-separated integers or ranges, got {text!r}") from None
	return values


def _sign_changes(values: np.ndarray) -> int:
	signs = np.sign(values[values != 0])
	return int(np.count_nonzero(np.diff(signs)))


class Run:
	"""One command invocation: validated config, writer, and the manifest written on exit."""

	def __init__(self, ctx: click.Context, command: str, **options: Any) -> None:
		self.config: AppConfig = ctx.obj
		self.command = command
		self.options = {k: v for k, v in options.items() if v is not None}
		self.warnings: list[str] = []
		self.outputs: list[str] = []
		self.failed = False
		self._spectrum: AngularSpectrum | None = None
		self.writer: DataWriter | None = None

	def __enter__(self) -> Run:
		errors = self.config.validate()
		if errors:
			for error in errors:
				console.print(f"[red]Invalid configuration: {error}[/]")
			sys.exit(1)
		self.params: ModelParams = self.config.model.to_params()
		self.time: TimePoint = self.config.time.resolve(self.params)
		self.out_dir = self.config.paths.out_dir
		self.config.ensure_dirs()
		self.writer = create_writer(
			self.config.output_format,
			self.out_dir,
			archive_name=f"{self.command}.h5",
			attributes={"command": self.command, "version": __version__, "eta": self.time.eta},
		)
		logger.info("command_start", command=self.command, out_dir=str(self.out_dir))
		return self

	@property
	def eta(self) -> float:
		return self.time.eta

	@property
	def spectrum(self) -> AngularSpectrum:
		if self._spectrum is None:
			self._spectrum = self.config.spectrum.load()
		return self._spectrum

	def table(self, name: str, columns: dict[str, Any], comments: dict[str, Any] | None = None) -> None:
		assert self.writer is not None
		if not self.writer.write_table(name, columns, comments):
			self.failed = True

	def warn(self, message: str) -> None:
		self.warnings.append(message)
		console.print(f"[yellow]{message}[/]")

	def fail(self, message: str) -> None:
		self.failed = True
		console.print(f"[red]{message}[/]")

	def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
		if self.writer is not None:
			self.writer.close()
			self.outputs = list(self.writer.metrics.outputs) + self.outputs
			if self.writer.metrics.write_errors:
				self.failed = True

		handled = False
		if exc_type is not None and issubclass(exc_type, (ValueError, RuntimeError, OSError)):
			console.print(f"[red]Error: {exc_val}[/]")
			logger.error("command_failed", command=self.command, error=str(exc_val))
			self.failed = True
			handled = True

		manifest = RunManifest(
			command=self.command,
			version=__version__,
			model={
				"c": self.params.c,
				"D": self.params.D,
				"r": self.params.r,
				"eta_inf": self.params.eta_inf,
				"nu": self.params.nu,
			},
			time=TimeSpec(eta=self.time.eta, t=self.time.t),
			seed=self.config.monte_carlo.seed,
			parameters={"config": self.config.to_dict(), "options": self.options},
			outputs=self.outputs,
			warnings=self.warnings,
			success=not self.failed,
		)
		manifest.write(self.out_dir)
		if self.failed:
			sys.exit(1)
		if exc_type is None:
			console.print(f"[green]Done[/] - {len(self.outputs)} outputs in {self.out_dir}")
		return handled


@click.group()
@click.version_option(version=__version__, prog_name="sphdiff")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON run configuration")
@click.option("--c", "c", type=float, help="Signal speed c")
@click.option("--D", "D", type=float, help="Diffusivity D")
@click.option("--r", "r", type=float, help="Sphere radius r")
@click.option("--eta-inf", type=float, help="Conformal horizon eta_inf")
@click.option("--lambda", "cosmological_constant", type=float, help="Cosmological constant (sets eta_inf)")
@click.option("--eta", type=float, help="Conformal time")
@click.option("--t", "t", type=float, help="Physical time (converted to conformal time)")
@click.option("--lmax", type=int, help="Spectrum band limit")
@click.option("--seed", type=int, help="Base random seed")
@click.option("--grid", "grid_spec", help="Map grid as NTHETAxNPHI")
@click.option("--grid-kind", type=click.Choice(GRID_KINDS), help="Colatitude nodes")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory")
@click.option("--spectrum", "spectrum_path", type=click.Path(dir_okay=False), help="Spectrum file (l,Cl)")
@click.option("--builtin", type=click.Choice(BUILTIN_SPECTRA), help="Built-in test spectrum")
@click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS), help="Output format")
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), help="Log level")
@click.pass_context
def main(
	ctx: click.Context,
	config_path: str | None,
	c: float | None,
	D: float | None,
	r: float | None,
	eta_inf: float | None,
	cosmological_constant: float | None,
	eta: float | None,
	t: float | None,
	lmax: int | None,
	seed: int | None,
	grid_spec: str | None,
	grid_kind: str | None,
	out_dir: str | None,
	spectrum_path: str | None,
	builtin: str | None,
	output_format: str | None,
	log_level: str | None,
) -> None:
	"""sphdiff - stochastic hyperbolic diffusion on an expanding sphere."""
	if eta is not None and t is not None:
		raise click.UsageError("--eta and --t are mutually exclusive")

	config = AppConfig.load(config_path)
	overrides: dict[str, Any] = {
		"model.c": c,
		"model.D": D,
		"model.r": r,
		"model.eta_inf": eta_inf,
		"model.cosmological_constant": cosmological_constant,
		"time.eta": eta,
		"time.t": t,
		"spectrum.lmax": lmax,
		"spectrum.builtin": builtin,
		"spectrum.path": Path(spectrum_path) if spectrum_path else None,
		"monte_carlo.seed": seed,
		"grid.kind": grid_kind,
		"paths.out_dir": Path(out_dir) if out_dir else None,
		"output_format": output_format,
		"log_level": log_level.upper() if log_level else None,
	}
	if grid_spec is not None:
		try:
			grid = SphericalGrid.parse(grid_spec)
		except ValueError as e:
			raise click.BadParameter(str(e), param_hint="--grid") from None
		overrides["grid.n_theta"] = grid.n_theta
		overrides["grid.n_phi"] = grid.n_phi
	config.merge_overrides(overrides)
	if builtin is not None and spectrum_path is None:
		config.spectrum.path = None

	configure_logging(config.log_level)
	ctx.obj = config


@main.command()
@click.option("--etas", default="0.001,0.002", help="Times for the F_l vs l curves")
@click.option("--degrees", default="0,3,10", help="Degrees for the F_l vs eta curves")
@click.option("--curve-lmax", type=int, default=500, help="Largest l in the F_l vs l curves")
@click.option("--n-eta", type=int, default=400, help="Points in the F_l vs eta curves")
@click.pass_context
def factors(ctx: click.Context, etas: str, degrees: str, curve_lmax: int, n_eta: int) -> None:
	"""Evolution factors F_l as functions of l and of eta."""
	eta_list = _floats(etas)
	degree_list = _ints(degrees)
	with Run(ctx, "factors", etas=eta_list, degrees=degree_list, curve_lmax=curve_lmax, n_eta=n_eta) as run:
		l = np.arange(curve_lmax + 1)
		by_l: dict[str, Any] = {"l": l}
		for e in eta_list:
			by_l[f"eta={e!r}"] = evolution_factors(run.params, curve_lmax, e)
		run.table("factors_vs_l", by_l, {"nu": run.params.nu})

		grid = np.linspace(0.0, 0.99 * run.params.eta_inf, n_eta)
		by_eta: dict[str, Any] = {"eta": grid}
		for degree in degree_list:
			by_eta[f"l={degree}"] = np.array([evolution_factor(run.params, degree, e) for e in grid])
		run.table("factors_vs_eta", by_eta, {"nu": run.params.nu})

		t = Table(title="F_l vs l")
		t.add_column("eta", style="cyan")
		t.add_column("Sign changes", style="green")
		t.add_column("max |F_l|, l>=1", style="yellow")
		for e in eta_list:
			values = by_l[f"eta={e!r}"][1:]
			t.add_row(f"{e:g}", str(_sign_changes(values)), f"{np.max(np.abs(values)):.4f}" if values.size else "---")
		console.print(t)


@main.command("evolve-spectrum")
@click.pass_context
def evolve_spectrum(ctx: click.Context) -> None:
	"""Angular spectrum C_l F_l(eta)^2 at the requested time."""
	with Run(ctx, "evolve-spectrum") as run:
		spec = run.spectrum
		evolved = evolved_spectrum(spec, run.params, run.time)
		l = spec.degrees
		band = l * (l + 1.0) / (2.0 * math.pi)
		run.table(
			"spectrum_evolved",
			{"l": l, "Cl": spec.cl, "Cl_eta": evolved.cl, "Dl": band * spec.cl, "Dl_eta": band * evolved.cl},
			{"eta": run.eta},
		)

		t = Table(title="Spectrum evolution")
		t.add_column("Quantity", style="cyan")
		t.add_column("eta = 0", style="green")
		t.add_column(f"eta = {run.eta:g}", style="green")
		t.add_row("lmax", str(spec.lmax), str(evolved.lmax))
		t.add_row("Variance", f"{variance(spec, run.params, 0.0):.6g}", f"{variance(spec, run.params, run.time):.6g}")
		t.add_row("sum C_l (2l+1)", f"{spec.weighted_sum:.6g}", f"{evolved.weighted_sum:.6g}")
		console.print(t)


@main.command()
@click.option("--eta-prime", type=float, help="Second time (defaults to --eta)")
@click.option("--n-theta", "n_theta", type=int, default=361, help="Angles on [0, pi]")
@click.option("--surface-eta-max", type=float, help="Upper time of the surface (default 2 eta)")
@click.option("--n-surface", type=int, default=41, help="Times in the surface")
@click.pass_context
def covariance(
	ctx: click.Context, eta_prime: float | None, n_theta: int, surface_eta_max: float | None, n_surface: int
) -> None:
	"""Covariance and correlation curves and the (Theta, eta) covariance surface."""
	with Run(ctx, "covariance", eta_prime=eta_prime, n_theta=n_theta, surface_eta_max=surface_eta_max,
			n_surface=n_surface) as run:
		spec, params = run.spectrum, run.params
		second = run.eta if eta_prime is None else eta_prime
		thetas = np.linspace(0.0, math.pi, n_theta)

		run.table(
			"covariance_curve",
			{"theta": thetas, "covariance": covariance_curve(spec, params, run.time, second, thetas)},
			{"eta": run.eta, "eta_prime": second},
		)

		initial = np.asarray(correlation(spec, params, 0.0, thetas))
		current = np.asarray(correlation(spec, params, run.time, thetas))
		run.table(
			"correlation",
			{"theta": thetas, "corr_0": initial, "corr_eta": current, "difference": current - initial},
			{"eta": run.eta},
		)

		top = surface_eta_max if surface_eta_max is not None else min(2.0 * run.eta, float(np.nextafter(params.eta_max, 0.0)))
		etas = np.linspace(0.0, top, n_surface)
		surface = covariance_surface(spec, params, etas, thetas)
		eta_col, theta_col = np.meshgrid(etas, thetas, indexing="ij")
		run.table(
			"covariance_surface",
			{"eta": eta_col.ravel(), "theta": theta_col.ravel(), "value": surface.ravel()},
			{"normalization": "K(0,0,0)"},
		)

		t = Table(title="Covariance")
		t.add_column("Quantity", style="cyan")
		t.add_column("Value", style="green")
		t.add_row("Variance at eta=0", f"{variance(spec, params, 0.0):.6g}")
		t.add_row(f"Variance at eta={run.eta:g}", f"{variance(spec, params, run.time):.6g}")
		t.add_row("max |corr_eta - corr_0|", f"{np.nanmax(np.abs(current - initial)):.4g}")
		console.print(t)


@main.command("synthesize")
@click.option("--coefficients", "coefficients_path", type=click.Path(exists=True, dir_okay=False),
	help="Coefficient file (l,m,re,im) instead of sampling")
@click.option("--initial/--no-initial", default=False, help="Also write the eta=0 map")
@click.pass_context
def synthesize_cmd(ctx: click.Context, coefficients_path: str | None, initial: bool) -> None:
	"""Sample (or read) coefficients, evolve them and synthesize a map."""
	with Run(ctx, "synthesize", coefficients=coefficients_path, initial=initial) as run:
		grid = run.config.grid
		if coefficients_path:
			coefficients = load_coefficients(coefficients_path)
		else:
			coefficients = sample_coefficients(run.spectrum, run.config.monte_carlo.seed)
		evolved = evolve_coefficients(coefficients, run.params, run.time)

		assert run.writer is not None
		maps = [("map", evolved, run.eta)]
		if initial:
			maps.append(("map_initial", coefficients, 0.0))
		t = Table(title="Synthesized maps")
		t.add_column("Map", style="cyan")
		t.add_column("eta", style="dim")
		t.add_column("min", style="green")
		t.add_column("max", style="green")
		t.add_column("mean", style="yellow")
		for name, coeffs, eta in maps:
			field_map = synthesize(coeffs, grid.n_theta, grid.n_phi, grid.kind, eta, grid.max_points)  # type: ignore[arg-type]
			if not run.writer.write_map(name, field_map):
				run.failed = True
			mean = integrate(field_map) / (4.0 * math.pi)
			t.add_row(name, f"{eta:g}", f"{field_map.values.min():.4g}", f"{field_map.max():.4g}", f"{mean:.4g}")
		console.print(t)


@main.command()
@click.option("--L-values", "l_values", help="Truncation degrees (default: 16 steps up to lmax)")
@click.option("--h-values", default="1e-2,1e-3,1e-4", help="Time increments for the increment norm")
@click.pass_context
def truncation(ctx: click.Context, l_values: str | None, h_values: str) -> None:
	"""Exact truncation error and its bound versus L; time-increment norms."""
	with Run(ctx, "truncation", L_values=l_values, h_values=h_values) as run:
		spec, params = run.spectrum, run.params
		if l_values:
			degrees = _ints(l_values)
		else:
			degrees = sorted(set(np.linspace(-1, spec.lmax, 17).round().astype(int).tolist()))
		results = [truncation_error(spec, params, run.time, L) for L in degrees]
		run.table(
			"truncation",
			{
				"L": np.array(degrees),
				"exact_norm": np.array([r.exact_norm for r in results]),
				"series_bound": np.array([r.series_bound for r in results]),
				"envelope": np.array([r.envelope for r in results]),
				"tail_variance": np.array([tail_variance(spec, params, run.time, L) for L in degrees]),
			},
			{"eta": run.eta},
		)

		hs = [h for h in _floats(h_values) if run.eta + h < params.eta_max]
		if len(hs) < len(_floats(h_values)):
			run.warn("Increments reaching the horizon were skipped")
		norms = np.array([time_increment_norm(spec, params, run.time, h) for h in hs])
		run.table("time_increment", {"h": np.array(hs), "norm": norms, "ratio": norms / np.array(hs)}, {"eta": run.eta})

		t = Table(title="Truncation error")
		t.add_column("L", style="cyan")
		t.add_column("Exact norm", style="green")
		t.add_column("Bound", style="yellow")
		for r in results:
			t.add_row(str(r.L), f"{r.exact_norm:.4e}", f"{r.series_bound:.4e}")
		console.print(t)


@main.command()
@click.option("--resolution", type=int, help="Theta grid points (default from bounds config)")
@click.option("--n-eps", "n_eps", type=int, default=200, help="Points in the g(eps) curve")
@click.pass_context
def metric(ctx: click.Context, resolution: int | None, n_eps: int) -> None:
	"""Canonical pseudometric d_eta(Theta) and the cap angle g_eta(eps)."""
	with Run(ctx, "metric", resolution=resolution, n_eps=n_eps) as run:
		spec, params = run.spectrum, run.params
		thetas = theta_grid(resolution or run.config.bounds.theta_resolution)
		distances = np.asarray(pseudometric(spec, params, run.time, thetas))
		run.table("pseudometric", {"theta": thetas, "d": distances}, {"eta": run.eta})

		radius = float(distances.max())
		eps = np.linspace(0.0, radius, n_eps)
		angles, empty = cap_angles(thetas, distances, eps)
		run.table("g_eps", {"eps": eps, "g": angles, "empty": empty.astype(int)}, {"eta": run.eta, "R": radius})

		report = check_condition(evolved_spectrum(spec, params, run.time), ConditionKind.BETA_SMOOTH, beta=2.0)
		if not report.ok:
			run.warn(f"Slow spectral decay: slope {report.slope:.3g} on l in {report.fit_range}")

		t = Table(title="Pseudometric")
		t.add_column("Quantity", style="cyan")
		t.add_column("Value", style="green")
		t.add_row("R = max d", f"{radius:.6g}")
		t.add_row("argmax Theta", f"{thetas[int(np.argmax(distances))]:.4f}")
		t.add_row("Decay slope (beta=2)", f"{report.slope:.3g} ({report.status.value})")
		console.print(t)


@main.command("mc-sup")
@click.option("--n-real", type=int, help="Realizations (default from config)")
@click.option("--workers", type=int, help="Worker threads")
@click.option("--refine-count", type=int, help="Realizations re-evaluated on a 2x grid")
@click.option("--tail-from", type=int, help="Keep only degrees l > L (truncation error field)")
@click.option("--absolute", is_flag=True, help="Record max |u| instead of max u")
@click.option("--keep-maps", is_flag=True, help="Store every realization map (h5 format)")
@click.pass_context
def mc_sup(
	ctx: click.Context,
	n_real: int | None,
	workers: int | None,
	refine_count: int | None,
	tail_from: int | None,
	absolute: bool,
	keep_maps: bool,
) -> None:
	"""Monte Carlo distribution of the grid supremum."""
	from sphdiff.excursion import mc_sup_distribution

	ctx.obj.merge_overrides(
		{"monte_carlo.n_real": n_real, "monte_carlo.workers": workers, "monte_carlo.refine_count": refine_count}
	)
	with Run(ctx, "mc-sup", tail_from=tail_from, absolute=absolute, keep_maps=keep_maps) as run:
		mc, grid = run.config.monte_carlo, run.config.grid
		sample = mc_sup_distribution(
			run.spectrum, run.params, run.time, mc.n_real, grid.n_theta, grid.n_phi, mc.seed,
			kind=grid.kind,  # type: ignore[arg-type]
			tail_from=tail_from, absolute=absolute, refine_count=mc.refine_count, workers=mc.workers,
			keep_maps=keep_maps, max_points=grid.max_points,
		)
		run.table("sup_sample", {"sup": sample.values}, sample.header())
		summary = sample.summary()
		run.table("sup_summary", {"statistic": np.array(list(summary), dtype=object),
			"value": np.array([float(v) for v in summary.values()])})
		assert run.writer is not None
		for i, field_map in enumerate(sample.maps):
			if not run.writer.write_map(f"realization_{i:05d}", field_map):
				run.failed = True
		if sample.mean < sample.median:
			run.warn("Sample mean is below the median")

		t = Table(title=f"Grid supremum, {sample.n} realizations")
		t.add_column("Statistic", style="cyan")
		t.add_column("Value", style="green")
		for key, value in summary.items():
			t.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
		console.print(t)


@main.command()
@click.option("--route", type=click.Choice(["mc", "entropy", "both"]), default="both", help="E sup estimate")
@click.option("--sample", "sample_path", type=click.Path(exists=True, dir_okay=False),
	help="Existing sup_sample file (skips the Monte Carlo run)")
@click.option("--n-x", type=int, default=60, help="Thresholds in the sweep")
@click.option("--x-max", type=float, help="Largest threshold (default E sup + 6 sigma)")
@click.option("--K", "K", type=float, help="Entropy constant K")
@click.option("--L", "L", type=int, help="Also bound the truncation error field u - u_L")
@click.pass_context
def bounds(
	ctx: click.Context, route: str, sample_path: str | None, n_x: int, x_max: float | None, K: float | None,
	L: int | None,
) -> None:
	"""Excursion bound sweep over x with the empirical exceedance curve."""
	from sphdiff.excursion import (
		K_CAVEAT,
		entropy_integral,
		exceedance_curve,
		excursion_bound,
		excursion_bound_entropy,
		mc_sup_distribution,
		truncation_excursion_bound,
	)

	ctx.obj.merge_overrides({"bounds.K": K})
	with Run(ctx, "bounds", route=route, sample=sample_path, n_x=n_x, x_max=x_max, L=L) as run:
		spec, params, cfg = run.spectrum, run.params, run.config
		sigma = math.sqrt(variance(spec, params, run.time))

		sups = None
		if route in ("mc", "both"):
			if sample_path:
				sups = read_table(sample_path)["sup"].to_numpy(dtype=np.float64)
			else:
				sample = mc_sup_distribution(
					spec, params, run.time, cfg.monte_carlo.n_real, cfg.grid.n_theta, cfg.grid.n_phi,
					cfg.monte_carlo.seed, kind=cfg.grid.kind, workers=cfg.monte_carlo.workers,  # type: ignore[arg-type]
					max_points=cfg.grid.max_points,
				)
				sups = sample.values
				run.table("sup_sample", {"sup": sups}, sample.header())
		entropy = None
		if route in ("entropy", "both"):
			entropy = entropy_integral(spec, params, run.time, cfg.bounds.K, cfg.bounds.n_eps,
				cfg.bounds.theta_resolution)
			run.warn(K_CAVEAT)

		esups = [float(np.mean(sups))] if sups is not None else []
		if entropy is not None:
			esups.append(entropy.upper)
		x_lo = min(esups)
		x_hi = x_max if x_max is not None else max(esups) + 6.0 * sigma
		xs = np.linspace(x_lo, x_hi, n_x)

		rows: dict[str, list[Any]] = {"x": [], "bound": [], "method": [], "valid": []}
		reports = []
		tail_esup = None
		for x in xs:
			if sups is not None:
				reports.append(excursion_bound(spec, params, run.time, float(x), float(np.mean(sups))))
			if entropy is not None:
				reports.append(excursion_bound_entropy(spec, params, run.time, float(x), cfg.bounds.K, entropy=entropy))
			if L is not None:
				report = truncation_excursion_bound(
					spec, params, run.time, L, float(x), tail_esup, K=cfg.bounds.K, n_eps=cfg.bounds.n_eps,
					theta_resolution=cfg.bounds.theta_resolution,
				)
				tail_esup = report.esup  # tail entropy is computed on the first threshold only
				reports.append(report)
		for report in reports:
			rows["x"].append(report.x)
			rows["bound"].append(report.bound)
			rows["method"].append(report.method.value)
			rows["valid"].append(int(report.valid))
		run.table("bounds", {k: np.array(v, dtype=object if k == "method" else None) for k, v in rows.items()})

		if sups is not None:
			curve = exceedance_curve(sups, xs)
			run.table("exceedance", {"x": xs, "probability": curve.probability, "stderr": curve.stderr})

		t = Table(title="Excursion bounds")
		t.add_column("Route", style="cyan")
		t.add_column("E sup", style="green")
		t.add_column("sigma", style="yellow")
		if sups is not None:
			t.add_row("borell-with-mc-esup", f"{np.mean(sups):.6g}", f"{sigma:.6g}")
		if entropy is not None:
			t.add_row("borell-with-entropy-K1", f"{entropy.upper:.6g}", f"{sigma:.6g}")
		console.print(t)


@main.command("oracle-check")
@click.option("--degrees", default="1-50", help="Degrees to check")
@click.option("--eta-fractions", default="0.1,0.3,0.5,0.8", help="Times as fractions of eta_inf")
@click.option("--tol", type=float, default=1e-6, help="Relative tolerance")
@click.pass_context
def oracle_check(ctx: click.Context, degrees: str, eta_fractions: str, tol: float) -> None:
	"""Compare the closed-form F_l against direct ODE integration."""
	degree_list = _ints(degrees)
	fractions = _floats(eta_fractions)
	with Run(ctx, "oracle-check", degrees=degree_list, eta_fractions=fractions, tol=tol) as run:
		params = run.params
		if any(d < 1 for d in degree_list):
			raise ValueError("oracle-check degrees must be >= 1")
		l_arr = np.array(degree_list)
		rows: dict[str, list[Any]] = {"l": [], "eta": [], "closed_form": [], "ode": [], "rel_error": [], "passed": []}
		t = Table(title="Closed form vs ODE")
		t.add_column("eta", style="cyan")
		t.add_column("max rel. error", style="green")
		t.add_column("ODE step", style="dim")
		t.add_column("Status")
		for fraction in fractions:
			eta = fraction * params.eta_inf
			closed = np.asarray(evolution_factor(params, l_arr, eta))
			oracle = ode_converged(params, l_arr, eta, run.config.numerics.ode_step, run.config.numerics.ode_tol)
			if not oracle.converged:
				run.warn(f"ODE oracle did not converge at eta={eta:g}")
			rel = np.abs(closed - oracle.values) / np.maximum(1.0, np.abs(closed))
			passed = rel <= tol
			rows["l"].extend(degree_list)
			rows["eta"].extend([eta] * len(degree_list))
			rows["closed_form"].extend(closed.tolist())
			rows["ode"].extend(oracle.values.tolist())
			rows["rel_error"].extend(rel.tolist())
			rows["passed"].extend(passed.astype(int).tolist())
			status = "[green]PASS[/]" if passed.all() else "[red]FAIL[/]"
			t.add_row(f"{eta:g}", f"{rel.max():.3e}", f"{oracle.step:.2e}", status)
		run.table("oracle_check", {k: np.array(v) for k, v in rows.items()}, {"tol": tol})
		console.print(t)
		if not all(rows["passed"]):
			run.fail("Oracle check failed")


@main.command()
@click.option("--amplitude", type=float, default=1.0, help="Spectrum amplitude")
@click.pass_context
def spectra(ctx: click.Context, amplitude: float) -> None:
	"""List and write the built-in test spectra."""
	with Run(ctx, "spectra", amplitude=amplitude) as run:
		lmax = run.config.spectrum.lmax
		t = Table(title=f"Built-in spectra (lmax={lmax})")
		t.add_column("Name", style="cyan")
		t.add_column("Variance", style="green")
		t.add_column("Decay slope (C2)", style="yellow")
		t.add_column("File", style="dim")
		for name in BUILTIN_SPECTRA:
			spec = builtin_spectrum(name, lmax, amplitude)
			path = save_spectrum(spec, run.out_dir / f"spectrum_{name}.csv")
			run.outputs.append(str(path))
			report = check_condition(spec, ConditionKind.C2_SMOOTH)
			t.add_row(name, f"{variance(spec, run.params, 0.0):.6g}", f"{report.slope:.3g} ({report.status.value})",
				path.name)
		console.print(t)


@main.command()
@click.option("--coefficients", "coefficients_path", type=click.Path(exists=True, dir_okay=False),
	help="Coefficient file (l,m,re,im) instead of sampling")
@click.pass_context
def coefficients(ctx: click.Context, coefficients_path: str | None) -> None:
	"""Coefficient magnitudes |a_lm| at eta = 0 and at the requested time."""
	from sphdiff.field import empirical_spectrum

	with Run(ctx, "coefficients", coefficients=coefficients_path) as run:
		if coefficients_path:
			initial = load_coefficients(coefficients_path)
		else:
			initial = sample_coefficients(run.spectrum, run.config.monte_carlo.seed)
		evolved = evolve_coefficients(initial, run.params, run.time)

		l_idx, m_idx = np.tril_indices(initial.lmax + 1)
		run.table(
			"coefficients_abs",
			{"l": l_idx, "m": m_idx, "abs_a0": np.abs(initial.values[l_idx, m_idx]),
				"abs_a_eta": np.abs(evolved.values[l_idx, m_idx])},
			{"eta": run.eta, "seed": run.config.monte_carlo.seed},
		)
		for name, coeffs in (("coefficients_initial.csv", initial), ("coefficients_eta.csv", evolved)):
			run.outputs.append(str(save_coefficients(coeffs, run.out_dir / name)))

		before, after = empirical_spectrum(initial), empirical_spectrum(evolved)
		t = Table(title="Empirical spectrum")
		t.add_column("Quantity", style="cyan")
		t.add_column("eta = 0", style="green")
		t.add_column(f"eta = {run.eta:g}", style="green")
		t.add_row("max |a_lm|", f"{np.abs(initial.values).max():.4g}", f"{np.abs(evolved.values).max():.4g}")
		t.add_row("sum C^_l (2l+1)", f"{before.weighted_sum:.6g}", f"{after.weighted_sum:.6g}")
		console.print(t)


if __name__ == "__main__":
	main()
