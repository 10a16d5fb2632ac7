"""Seeded Gaussian stream for coefficient sampling.

The bit generator is numpy's Philox (counter based, identical output on every
platform for a given seed). Normals come from the Box-Muller transform

	z0 = sqrt(-2 log u1) cos(2 pi u2)
	z1 = sqrt(-2 log u1) sin(2 pi u2)

applied to consecutive uniform pairs, with u1 = 1 - U so that u1 lies in
(0, 1]. The transform is fixed here and not delegated to
Generator.standard_normal, whose algorithm numpy does not promise to keep.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

SEED_MASK = (1 << 64) - 1


class GaussianStream:
	"""Standard normal draws from a Philox generator keyed by a 64-bit seed."""

	def __init__(self, seed: int) -> None:
		self.seed = int(seed) & SEED_MASK
		self._generator = np.random.Generator(np.random.Philox(self.seed))

	def uniforms(self, n: int) -> NDArray[np.float64]:
		return self._generator.random(n)

	def normals(self, n: int) -> NDArray[np.float64]:
		if n < 0:
			raise ValueError(f"Draw count ({n}) must be >= 0")
		pairs = (n + 1) // 2
		u = self.uniforms(2 * pairs).reshape(pairs, 2)
		radius = np.sqrt(-2.0 * np.log(1.0 - u[:, 0]))
		angle = 2.0 * np.pi * u[:, 1]
		z = np.empty((pairs, 2), dtype=np.float64)
		z[:, 0] = radius * np.cos(angle)
		z[:, 1] = radius * np.sin(angle)
		return z.reshape(-1)[:n]


def realization_seed(seed: int, index: int) -> int:
	"""Seed of the index-th realization in a run started from ``seed``."""
	return (int(seed) + int(index)) & SEED_MASK
