"""Pytest fixtures."""

import numpy as np
import pytest

from sphdiff.model import ModelParams
from sphdiff.spectrum import AngularSpectrum, builtin_spectrum


@pytest.fixture
def params() -> ModelParams:
	"""Dimensionless model: c = D = r = eta_inf = 1, so nu = 3/2."""
	return ModelParams()


@pytest.fixture
def small_spectrum() -> AngularSpectrum:
	"""Power law C_l = (l + 1)^-3 up to lmax = 16."""
	return builtin_spectrum("power_law", 16)


@pytest.fixture
def flat_spectrum() -> AngularSpectrum:
	return builtin_spectrum("flat", 8)


@pytest.fixture
def zero_spectrum() -> AngularSpectrum:
	return AngularSpectrum(np.zeros(9))
