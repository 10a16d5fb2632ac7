"""Special functions: Bessel functions of real order, Legendre functions, spherical harmonics."""

from sphdiff.special.bessel import DomainError, bessel_j, bessel_y
from sphdiff.special.harmonics import angular_distance, sph_harm
from sphdiff.special.legendre import (
	assoc_legendre,
	legendre_p,
	legendre_table,
	normalized_legendre_column,
	normalized_legendre_table,
)

__all__ = [
	"DomainError",
	"bessel_j",
	"bessel_y",
	"legendre_p",
	"legendre_table",
	"assoc_legendre",
	"normalized_legendre_table",
	"normalized_legendre_column",
	"sph_harm",
	"angular_distance",
]
