import json
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from semlab.adversary import AdversaryReport
from semlab.emulation import CanonicalRepresentation, RelationTable
from semlab.modal import DiamondCheck, WorldTable
from semlab.oracle import QueryTranscript

SCHEMA_VERSION = 1


class Outcome(str, Enum):
    EXPECTED = "expected"
    UNEXPECTED = "unexpected"
    ERROR = "error"


# --- emulate ---
class EmulationPayload(BaseModel):
    model_config = ConfigDict(frozen=True)

    language: str
    expression: str
    relation: str
    canonical: Optional[CanonicalRepresentation] = None
    table: Optional[RelationTable] = None
    queries: int
    transcript: QueryTranscript
    partial: bool = False


# --- adversary ---
class AdversaryBatch(BaseModel):
    """Reports of several seeded runs, in seed order."""

    model_config = ConfigDict(frozen=True)

    trials: int
    all_refuted_once: bool
    reports: Tuple[AdversaryReport, ...]


# --- modal diamond-example ---
class DiamondExample(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: WorldTable
    right: WorldTable
    check: DiamondCheck


# --- envelope ---
class Report(BaseModel):
    """What every command writes. ``timing`` is only set with --timing."""

    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    command: str
    config: Dict[str, Any]
    outcome: Outcome
    warnings: List[str] = []
    error: Optional[str] = None
    payload: Optional[BaseModel] = None
    timing: Optional[Dict[str, int]] = None

    def as_dict(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json", exclude={"payload"})
        data["payload"] = self.payload.model_dump(mode="json") if self.payload is not None else None
        if self.timing is None:
            data.pop("timing")
        return data

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"outcome: {self.outcome.value}"]
        lines.extend(f"warning: {warning}" for warning in self.warnings)
        if self.error:
            lines.append(f"error: {self.error}")
        payload = self.as_dict()["payload"] or {}
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (str, int, bool)) or value is None:
                lines.append(f"{key}: {value}")
            elif isinstance(value, list):
                lines.append(f"{key}: {len(value)} item(s)")
        return "\n".join(lines) + "\n"
