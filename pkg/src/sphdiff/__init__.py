"""sphdiff - stochastic hyperbolic diffusion on an expanding sphere.

Closed-form evolution factors, evolved angular spectra and covariances,
Gaussian random field synthesis, and truncation and excursion bounds.
"""

__version__ = "0.1.0"

from sphdiff.model import ModelParams, TimePoint, conformal_time, evolution_factor, evolution_factors
from sphdiff.spectrum import AngularSpectrum, builtin_spectrum, load_spectrum

__all__ = [
	"__version__",
	"ModelParams",
	"TimePoint",
	"conformal_time",
	"evolution_factor",
	"evolution_factors",
	"AngularSpectrum",
	"builtin_spectrum",
	"load_spectrum",
]
