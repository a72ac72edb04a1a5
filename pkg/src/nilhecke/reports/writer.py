"""JSON reports and CSV matrix exports, written atomically."""

from __future__ import annotations

import contextlib
import csv
import json
import logging
import tempfile
from pathlib import Path
from typing import Any
from typing import Iterable

from nilhecke import __version__


logger = logging.getLogger(__name__)

SCHEMA = "nilhecke.report/1"


def _atomic_write(path: Path, write: Any) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = None
    try:
        with tempfile.NamedTemporaryFile(
            mode="w",
            encoding="utf-8",
            newline="",
            dir=path.parent,
            prefix=f".tmp_{path.stem}_",
            suffix=".tmp",
            delete=False,
        ) as temp_file:
            temp_path = Path(temp_file.name)
            write(temp_file)
        temp_path.replace(path)
        temp_path = None
    finally:
        if temp_path and temp_path.exists():
            with contextlib.suppress(OSError):
                temp_path.unlink()


def write_json(path: str | Path, data: Any) -> Path:
    """Dump ``data`` as sorted, indented JSON."""
    path = Path(path)

    def dump(f: Any) -> None:
        json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")

    _atomic_write(path, dump)
    logger.debug("wrote %s", path)
    return path


def report_envelope(config: dict[str, Any], stages: dict[str, Any], verdicts: dict[str, bool]) -> dict[str, Any]:
    """The top-level report: schema, version, echoed config, stages and verdicts."""
    return {
        "schema": SCHEMA,
        "version": __version__,
        "config": config,
        "stages": stages,
        "verdicts": verdicts,
        "ok": all(verdicts.values()),
    }


def write_triplets(path: str | Path, triplets: Iterable[tuple[int, int, Any]]) -> Path:
    """A sparse matrix as ``row,col,value`` lines under a header."""
    path = Path(path)
    rows = [(r, c, str(v)) for r, c, v in triplets]

    def dump(f: Any) -> None:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["row", "col", "value"])
        writer.writerows(rows)

    _atomic_write(path, dump)
    return path
