"""Decay diagnostics for the summability conditions on the spectrum.

At finite lmax every sum is finite, so the report gives the partial sum and
the log-log slope of the summand over the upper half of the band instead of
a convergence verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import structlog

from sphdiff.spectrum.spectrum import AngularSpectrum

logger = structlog.get_logger(__name__)

SLOW_SLOPE = -1.0


class ConditionKind(str, Enum):
	L2_CONVERGENCE = "L2-convergence"
	C2_SMOOTH = "C2-smooth"
	BETA_SMOOTH = "beta-smooth"


class ConditionStatus(str, Enum):
	OK = "OK"
	SLOW = "SLOW"


@dataclass(frozen=True)
class ConditionReport:
	kind: ConditionKind
	beta: float | None
	partial_sum: float
	slope: float
	status: ConditionStatus
	fit_range: tuple[int, int]

	@property
	def ok(self) -> bool:
		return self.status is ConditionStatus.OK


def summand(spec: AngularSpectrum, kind: ConditionKind, beta: float | None = None) -> np.ndarray:
	"""Per-degree terms of the condition's series."""
	l = spec.degrees.astype(np.float64)
	if kind is ConditionKind.L2_CONVERGENCE:
		return spec.cl * (2.0 * l + 1.0)
	if kind is ConditionKind.C2_SMOOTH:
		return spec.cl * l**10 * (2.0 * l + 1.0)
	if beta is None or not 0.0 < beta <= 2.0:
		raise ValueError(f"beta ({beta}) must lie in (0, 2]")
	return spec.cl * l ** (1.0 + beta)


def check_condition(
	spec: AngularSpectrum, kind: ConditionKind | str, beta: float | None = None
) -> ConditionReport:
	"""Partial sum and tail decay slope of a spectrum condition.

	The slope is a least-squares fit of log(summand) against log(l) on
	l in [lmax/2, lmax], zero terms excluded. A slope above -1 is flagged SLOW.
	A tail with fewer than two nonzero terms has slope -inf.
	"""
	kind = ConditionKind(kind)
	terms = summand(spec, kind, beta)
	lo, hi = max(spec.lmax // 2, 1), spec.lmax
	l = np.arange(lo, hi + 1)
	window = terms[lo : hi + 1]
	positive = window > 0

	if np.count_nonzero(positive) >= 2:
		slope = float(np.polyfit(np.log(l[positive]), np.log(window[positive]), 1)[0])
	else:
		slope = -math.inf
	status = ConditionStatus.SLOW if slope > SLOW_SLOPE else ConditionStatus.OK

	report = ConditionReport(
		kind=kind,
		beta=beta if kind is ConditionKind.BETA_SMOOTH else None,
		partial_sum=float(np.sum(terms)),
		slope=slope,
		status=status,
		fit_range=(lo, hi),
	)
	if status is ConditionStatus.SLOW:
		logger.warning("spectrum_slow_decay", kind=kind.value, slope=slope, lmax=spec.lmax)
	return report
