"""Pydantic schema for the manifest written next to every command's outputs."""
from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field

from sphdiff.storage.writer import atomic_write_text


class TimeSpec(BaseModel):
	eta: float
	t: float | None = None  # set when the time was given physically


class RunManifest(BaseModel):
	command: str
	version: str
	created: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
	model: dict[str, float]
	time: TimeSpec | None = None
	seed: int | None = None
	parameters: dict[str, Any] = Field(default_factory=dict)
	outputs: list[str] = Field(default_factory=list)
	warnings: list[str] = Field(default_factory=list)
	success: bool = True

	def write(self, out_dir: str | Path) -> Path:
		return atomic_write_text(Path(out_dir) / "manifest.json", self.model_dump_json(indent=2) + "\n")
