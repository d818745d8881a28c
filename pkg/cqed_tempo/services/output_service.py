import json
import os
import tempfile
from datetime import datetime
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Literal

import pandas as pd
import structlog
from pydantic import BaseModel, Field

logger = structlog.stdlib.get_logger(__name__)

MANIFEST_FILE = "manifest.json"


def tool_version() -> str:
    try:
        return version("cqed-tempo")
    except PackageNotFoundError:
        return "0+unknown"


class RunRecord(BaseModel):
    """One engine run (a whole job, or one sweep entry)."""

    label: str
    status: Literal["ok", "failed"] = "ok"
    error: str | None = None
    outputs: list[str] = Field(default_factory=list)
    parameters: dict[str, Any] = Field(default_factory=dict)
    max_bond_dimension: int | None = None
    discarded_weight: float | None = None
    equilibration_residual: float | None = None
    warnings: list[str] = Field(default_factory=list)
    wall_clock_s: float = 0.0


class RunManifest(BaseModel):
    tool_version: str = Field(default_factory=tool_version)
    kind: str
    config: dict[str, Any]
    seedless: bool = False
    started_at: datetime
    wall_clock_s: float = 0.0
    outputs: list[str] = Field(default_factory=list)
    runs: list[RunRecord] = Field(default_factory=list)

    @property
    def failed(self) -> list[RunRecord]:
        return [run for run in self.runs if run.status == "failed"]


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    # %.17g round-trips every float64
    _atomic_write(path, frame.to_csv(index=False, float_format="%.17g"))
    logger.debug("csv_written", path=str(path), rows=len(frame))
    return path


def write_json(data: dict[str, Any], path: Path) -> Path:
    text = json.dumps(data, indent=2, sort_keys=True, default=str)
    _atomic_write(path, text + "\n")
    return path


def write_manifest(manifest: RunManifest, out_dir: Path) -> Path:
    path = out_dir / MANIFEST_FILE
    _atomic_write(path, manifest.model_dump_json(indent=2) + "\n")
    logger.info(
        "manifest_written",
        path=str(path),
        runs=len(manifest.runs),
        failed=len(manifest.failed),
    )
    return path
