"""Writers for curves, maps and Monte Carlo runs.

Text is the default format: comma-separated, a header row naming the
columns, optional ``# key=value`` comment lines on top. Floats are printed
with the shortest round-trip representation so that re-parsing gives the
same bits. Every file is written to a temporary sibling and moved into
place with os.replace.
"""

from __future__ import annotations

import os
import tempfile
from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

import h5py
import numpy as np
import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq
import structlog
from numpy.typing import ArrayLike

if TYPE_CHECKING:
	from sphdiff.field.synthesis import FieldMap

logger = structlog.get_logger(__name__)

SCHEMA_VERSION = "1.0.0"


def _temp_sibling(path: Path) -> Path:
	path.parent.mkdir(parents=True, exist_ok=True)
	fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
	os.close(fd)
	return Path(tmp)


def atomic_write_text(path: str | Path, text: str) -> Path:
	"""Write text via temp file + rename."""
	path = Path(path)
	tmp = _temp_sibling(path)
	try:
		tmp.write_text(text, encoding="utf-8")
		os.replace(tmp, path)
	except BaseException:
		tmp.unlink(missing_ok=True)
		raise
	return path


def _format_column(values: ArrayLike) -> list[str] | np.ndarray:
	arr = np.asarray(values)
	if arr.dtype.kind in "iub":
		return arr.astype(np.int64)
	if arr.dtype.kind == "f":
		return [repr(float(v)) for v in arr]
	return arr


def table_to_csv(columns: Mapping[str, ArrayLike], comments: Mapping[str, Any] | None = None) -> str:
	frame = pd.DataFrame({name: _format_column(values) for name, values in columns.items()})
	header = "".join(f"# {key}={value}\n" for key, value in (comments or {}).items())
	return header + frame.to_csv(index=False, lineterminator="\n")


def write_table(
	path: str | Path,
	columns: Mapping[str, ArrayLike],
	comments: Mapping[str, Any] | None = None,
) -> Path:
	"""Write a delimited text table atomically."""
	path = atomic_write_text(path, table_to_csv(columns, comments))
	logger.debug("table_written", path=str(path), rows=len(next(iter(columns.values()), [])))
	return path


@dataclass
class WriteMetrics:
	"""Metrics for tracking writes."""

	files_written: int = 0
	tables_written: int = 0
	maps_written: int = 0
	write_errors: int = 0
	last_error: str | None = None
	outputs: list[str] = field(default_factory=list)

	def to_dict(self) -> dict[str, Any]:
		return {
			"files_written": self.files_written,
			"tables_written": self.tables_written,
			"maps_written": self.maps_written,
			"write_errors": self.write_errors,
			"last_error": self.last_error,
		}


class DataWriter(ABC):
	@abstractmethod
	def write_table(
		self, name: str, columns: Mapping[str, ArrayLike], comments: Mapping[str, Any] | None = None
	) -> bool:
		"""Write a named table. Returns True on success."""
		pass

	@abstractmethod
	def write_map(self, name: str, field_map: FieldMap) -> bool:
		"""Write a named field map. Returns True on success."""
		pass

	@abstractmethod
	def close(self) -> None:
		pass

	@property
	@abstractmethod
	def metrics(self) -> WriteMetrics:
		pass

	def _record_error(self, what: str, error: Exception) -> bool:
		self.metrics.write_errors += 1
		self.metrics.last_error = str(error)
		logger.error("write_failed", what=what, error=str(error))
		return False

	def __enter__(self) -> DataWriter:
		return self

	def __exit__(self, exc_type, exc_val, exc_tb) -> None:
		self.close()


def map_columns(field_map: FieldMap) -> dict[str, np.ndarray]:
	"""Row-major theta, phi, value columns of a map."""
	theta, phi = np.meshgrid(field_map.grid.theta, field_map.grid.phi, indexing="ij")
	return {"theta": theta.ravel(), "phi": phi.ravel(), "value": field_map.values.ravel()}


class TextWriter(DataWriter):
	"""One text file per table or map inside an output directory."""

	def __init__(self, out_dir: str | Path) -> None:
		self.out_dir = Path(out_dir)
		self.out_dir.mkdir(parents=True, exist_ok=True)
		self._metrics = WriteMetrics()

	@property
	def metrics(self) -> WriteMetrics:
		return self._metrics

	def _path(self, name: str) -> Path:
		return self.out_dir / (name if Path(name).suffix else f"{name}.csv")

	def write_table(
		self, name: str, columns: Mapping[str, ArrayLike], comments: Mapping[str, Any] | None = None
	) -> bool:
		try:
			path = write_table(self._path(name), columns, comments)
		except Exception as e:
			return self._record_error(name, e)
		self._metrics.files_written += 1
		self._metrics.tables_written += 1
		self._metrics.outputs.append(str(path))
		return True

	def write_map(self, name: str, field_map: FieldMap) -> bool:
		comments = {"eta": field_map.eta, "n_theta": field_map.grid.n_theta, "n_phi": field_map.grid.n_phi,
			"grid": field_map.grid.kind}
		if not self.write_table(name, map_columns(field_map), comments):
			return False
		self._metrics.tables_written -= 1
		self._metrics.maps_written += 1
		return True

	def close(self) -> None:
		logger.info("text_writer_closed", out_dir=str(self.out_dir), **self._metrics.to_dict())


class ParquetWriter(DataWriter):
	"""One Parquet file per table or map; comments go into the key/value metadata."""

	def __init__(self, out_dir: str | Path) -> None:
		self.out_dir = Path(out_dir)
		self.out_dir.mkdir(parents=True, exist_ok=True)
		self._metrics = WriteMetrics()

	@property
	def metrics(self) -> WriteMetrics:
		return self._metrics

	def write_table(
		self, name: str, columns: Mapping[str, ArrayLike], comments: Mapping[str, Any] | None = None
	) -> bool:
		path = self.out_dir / f"{Path(name).stem}.parquet"
		try:
			table = pa.Table.from_pandas(pd.DataFrame({k: np.asarray(v) for k, v in columns.items()}),
				preserve_index=False)
			metadata = {b"schema_version": SCHEMA_VERSION.encode()}
			metadata.update({str(k).encode(): str(v).encode() for k, v in (comments or {}).items()})
			table = table.replace_schema_metadata({**(table.schema.metadata or {}), **metadata})
			tmp = _temp_sibling(path)
			try:
				pq.write_table(table, tmp, compression="snappy")
				os.replace(tmp, path)
			except BaseException:
				tmp.unlink(missing_ok=True)
				raise
		except Exception as e:
			return self._record_error(name, e)
		self._metrics.files_written += 1
		self._metrics.tables_written += 1
		self._metrics.outputs.append(str(path))
		return True

	def write_map(self, name: str, field_map: FieldMap) -> bool:
		comments = {"eta": field_map.eta, "n_theta": field_map.grid.n_theta, "n_phi": field_map.grid.n_phi,
			"grid": field_map.grid.kind}
		if not self.write_table(name, map_columns(field_map), comments):
			return False
		self._metrics.tables_written -= 1
		self._metrics.maps_written += 1
		return True

	def close(self) -> None:
		logger.info("parquet_writer_closed", out_dir=str(self.out_dir), **self._metrics.to_dict())


class HDF5Writer(DataWriter):
	"""Single HDF5 archive: tables become groups of column datasets, maps become 2-D datasets."""

	def __init__(
		self,
		path: str | Path,
		attributes: Mapping[str, Any] | None = None,
		compression: str = "gzip",
		compression_level: int = 4,
	) -> None:
		self.path = Path(path)
		self.compression = compression
		self.compression_level = compression_level
		self._metrics = WriteMetrics()
		self._tmp = _temp_sibling(self.path)
		self._file: h5py.File | None = h5py.File(self._tmp, "w")
		self._file.attrs["schema_version"] = SCHEMA_VERSION
		for key, value in (attributes or {}).items():
			self._file.attrs[key] = value
		self._tables = self._file.create_group("tables")
		self._maps = self._file.create_group("maps")
		logger.info("hdf5_writer_init", path=str(self.path))

	@property
	def metrics(self) -> WriteMetrics:
		return self._metrics

	def _opts(self) -> dict[str, Any]:
		opts: dict[str, Any] = {"compression": self.compression}
		if self.compression == "gzip":
			opts["compression_opts"] = self.compression_level
		return opts

	def write_table(
		self, name: str, columns: Mapping[str, ArrayLike], comments: Mapping[str, Any] | None = None
	) -> bool:
		try:
			group = self._tables.create_group(Path(name).stem)
			for key, value in (comments or {}).items():
				group.attrs[key] = value
			for column, values in columns.items():
				arr = np.asarray(values)
				if arr.dtype.kind in "OU":
					arr = arr.astype(h5py.string_dtype())
					group.create_dataset(column, data=arr)
				else:
					group.create_dataset(column, data=arr, **self._opts())
		except Exception as e:
			return self._record_error(name, e)
		self._metrics.tables_written += 1
		return True

	def write_map(self, name: str, field_map: FieldMap) -> bool:
		try:
			ds = self._maps.create_dataset(Path(name).stem, data=field_map.values, **self._opts())
			ds.attrs["eta"] = field_map.eta
			ds.attrs["grid"] = field_map.grid.kind
			ds.attrs["theta"] = field_map.grid.theta
			ds.attrs["phi"] = field_map.grid.phi
		except Exception as e:
			return self._record_error(name, e)
		self._metrics.maps_written += 1
		return True

	def close(self) -> None:
		if self._file is None:
			return
		try:
			self._file.attrs["total_tables"] = self._metrics.tables_written
			self._file.attrs["total_maps"] = self._metrics.maps_written
			self._file.close()
			os.replace(self._tmp, self.path)
			self._metrics.files_written += 1
			self._metrics.outputs.append(str(self.path))
			logger.info("hdf5_writer_closed", path=str(self.path), **self._metrics.to_dict())
		except Exception as e:
			self._record_error(str(self.path), e)
			self._tmp.unlink(missing_ok=True)
		finally:
			self._file = None


def create_writer(fmt: str, out_dir: str | Path, archive_name: str = "run.h5",
		attributes: Mapping[str, Any] | None = None) -> DataWriter:
	"""Writer for 'text', 'parquet' or 'h5'."""
	if fmt == "text":
		return TextWriter(out_dir)
	if fmt == "parquet":
		return ParquetWriter(out_dir)
	if fmt == "h5":
		return HDF5Writer(Path(out_dir) / archive_name, attributes=attributes)
	raise ValueError(f"Unsupported format: {fmt}")
