"""Type definitions for nilhecke pipeline results."""

from __future__ import annotations

from enum import Enum
from typing import Any
from typing import NamedTuple


class Stage(Enum):
    """Pipeline stages, in execution order."""

    LOCAL_COMMUTE = "local-commute"
    ENUMERATE = "enumerate"
    HECKE = "hecke"
    CUSPIDAL = "cuspidal"
    SPECTRAL = "spectral"


class StageResult(NamedTuple):
    """Outcome of one pipeline stage."""

    stage: Stage
    data: dict[str, Any]
    verdicts: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


class PipelineResult(NamedTuple):
    """Every stage of one run and the report it was written to."""

    config: dict[str, Any]
    stages: list[StageResult]
    report: dict[str, Any]
    report_path: str | None = None

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.stages)

    def verdicts(self) -> dict[str, bool]:
        return {f"{s.stage.value}.{k}": v for s in self.stages for k, v in s.verdicts.items()}


# Type aliases for better readability
JSONDict = dict[str, Any]
DivisorText = str
