"""Check outcomes and the shared report serialization (schema_version 1).

Every number is written as an exact decimal string ("7", "-1/2"), keys are
sorted, and no wall-clock data is included unless asked for, so reports are
byte-identical across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckOutcome:
    name: str
    status: str
    detail: dict[str, Any] = field(default_factory=dict)
    reason: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == SKIPPED and not self.reason:
            raise ValueError("a skipped check needs a reason")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict[str, Any]:
        d = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.reason:
            d["reason"] = self.reason
        return d


def jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return str(obj)


def dump_json(kind: str, payload: dict[str, Any]) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, **jsonable(payload)}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def dump_text(payload: dict[str, Any], indent: str = "") -> str:
    """Flat ``key: value`` lines; nested records are indented."""
    lines = []
    for key in sorted(payload):
        value = jsonable(payload[key])
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(dump_text(value, indent + "  ").rstrip("\n"))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(f"{indent}  -")
                lines.append(dump_text(item, indent + "    ").rstrip("\n"))
        else:
            if isinstance(value, list):
                value = ", ".join(str(v) for v in value)
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(line for line in lines if line) + "\n"
