"""JSON report documents with exact values stored as strings."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

from .exact_scalar import QuadScalar

SCHEMA = 1
TIMESTAMP_KEY = "generated_at"


def scalar_entry(v: Any) -> dict[str, str]:
    """Exact text plus an advisory 12-digit decimal."""
    q = v if isinstance(v, QuadScalar) else QuadScalar.parse(str(v))
    return {"exact": q.to_text(), "decimal": q.decimal_text(12)}


def jsonable(value: Any) -> Any:
    """Recursively convert scalars to exact entries and tuples to lists."""
    if isinstance(value, (QuadScalar, Fraction)):
        return scalar_entry(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{self.name}\t{'PASS' if self.ok else 'FAIL'}\t{self.detail}"


@dataclass
class ReportDocument:
    command: list[str]
    parameters: dict[str, Any]
    checks: list[dict[str, Any]]
    results: dict[str, Any]
    figures: list[str] = field(default_factory=list)
    verdict: bool = True
    schema: int = SCHEMA
    generated_at: str = ""

    @classmethod
    def build(cls, command, parameters, checks: list[Check], results, figures=()) -> ReportDocument:
        return cls(
            command=list(command),
            parameters=jsonable(parameters),
            checks=[asdict(c) for c in checks],
            results=jsonable(results),
            figures=sorted(figures),
            verdict=all(c.ok for c in checks),
            generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(**data)

    def without_timestamp(self) -> dict[str, Any]:
        d = self.to_dict()
        d.pop(TIMESTAMP_KEY, None)
        return d

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


def exact_value(entry: dict[str, str]) -> QuadScalar:
    """Recover the authoritative value from a serialized scalar entry."""
    return QuadScalar.parse(entry["exact"])
