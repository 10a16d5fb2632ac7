"""Readers for tables and Monte Carlo archives written by sphdiff.storage.writer."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import h5py
import numpy as np
import pandas as pd
import pyarrow.parquet as pq
import structlog
from numpy.typing import NDArray

logger = structlog.get_logger(__name__)


def read_table(path: str | Path) -> pd.DataFrame:
	"""Read a text table; floats come back bit-identical to what was written."""
	path = Path(path)
	if not path.exists():
		raise FileNotFoundError(f"Not found: {path}")
	if path.suffix in [".parquet", ".pq"]:
		return pd.read_parquet(path)
	return pd.read_csv(path, comment="#", float_precision="round_trip")


def read_comments(path: str | Path) -> dict[str, str]:
	"""The ``# key=value`` header lines of a text table."""
	comments: dict[str, str] = {}
	with open(path, encoding="utf-8") as f:
		for line in f:
			if not line.startswith("#"):
				break
			key, _, value = line[1:].strip().partition("=")
			comments[key.strip()] = value.strip()
	return comments


class DataReader:
	"""Read a Monte Carlo archive. Supports HDF5 and Parquet tables."""

	def __init__(self, path: str | Path) -> None:
		self.path = Path(path)
		if not self.path.exists():
			raise FileNotFoundError(f"Not found: {self.path}")

		self._file: h5py.File | None = None
		self._parquet = False

		if self.path.suffix in [".parquet", ".pq"]:
			self._parquet = True
		elif self.path.suffix in [".h5", ".hdf5"]:
			self._file = h5py.File(self.path, "r")
		else:
			raise ValueError(f"Unsupported format: {self.path.suffix}")

		logger.info("data_reader_init", path=str(self.path))

	@property
	def metadata(self) -> dict[str, Any]:
		if self._parquet:
			schema = pq.read_schema(self.path)
			return {k.decode(): v.decode() for k, v in (schema.metadata or {}).items() if k != b"pandas"}
		if self._file is None:
			return {}
		return {key: self._file.attrs[key] for key in self._file.attrs}

	@property
	def table_names(self) -> list[str]:
		if self._parquet:
			return [self.path.stem]
		if self._file is None or "tables" not in self._file:
			return []
		return sorted(self._file["tables"].keys())

	@property
	def map_names(self) -> list[str]:
		if self._parquet or self._file is None or "maps" not in self._file:
			return []
		return sorted(self._file["maps"].keys())

	def get_table(self, name: str | None = None) -> pd.DataFrame:
		if self._parquet:
			return pd.read_parquet(self.path)
		if self._file is None or name is None:
			return pd.DataFrame()
		group = self._file["tables"][name]
		return pd.DataFrame({key: group[key][:] for key in group.keys()})

	def get_map(self, name: str) -> tuple[NDArray[np.float64], dict[str, Any]]:
		"""Map values plus their attributes (eta, grid, theta, phi)."""
		if self._file is None:
			raise ValueError("Maps are only stored in HDF5 archives")
		ds = self._file["maps"][name]
		return ds[:], {key: ds.attrs[key] for key in ds.attrs}

	def close(self) -> None:
		if self._file:
			self._file.close()
			self._file = None

	def __enter__(self) -> DataReader:
		return self

	def __exit__(self, exc_type, exc_val, exc_tb) -> None:
		self.close()
