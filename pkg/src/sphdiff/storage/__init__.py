"""Storage for curves, maps, Monte Carlo archives and run manifests."""

from sphdiff.storage.manifest import RunManifest, TimeSpec
from sphdiff.storage.reader import DataReader, read_comments, read_table
from sphdiff.storage.writer import (
	DataWriter,
	HDF5Writer,
	ParquetWriter,
	TextWriter,
	WriteMetrics,
	atomic_write_text,
	create_writer,
	write_table,
)

__all__ = [
	"DataWriter",
	"TextWriter",
	"ParquetWriter",
	"HDF5Writer",
	"WriteMetrics",
	"create_writer",
	"write_table",
	"atomic_write_text",
	"DataReader",
	"read_table",
	"read_comments",
	"RunManifest",
	"TimeSpec",
]
