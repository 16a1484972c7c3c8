"""Evaluated closed-form bounds with their formulas echoed."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import mpmath


@dataclass(frozen=True)
class BoundEntry:
    name: str
    formula: str  # sympy-parsable in the report's input names
    value: float | str | None  # None when a hypothesis fails; str past the double range
    note: str = ""


@dataclass
class BoundReport:
    title: str
    inputs: dict[str, Any]
    entries: list[BoundEntry] = field(default_factory=list)
    flags: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, formula: str, value, note: str = "") -> None:
        self.entries.append(BoundEntry(name, formula, _number(value), note))

    def __getitem__(self, name: str) -> float | str | None:
        for e in self.entries:
            if e.name == name:
                return e.value
        raise KeyError(name)

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
            "entries": [
                {"name": e.name, "formula": e.formula, "value": e.value, "note": e.note} for e in self.entries
            ],
            "flags": {k: _jsonable(v) for k, v in self.flags.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def csv_rows(self) -> list[dict]:
        inputs = json.dumps({k: _jsonable(v) for k, v in self.inputs.items()}, separators=(",", ":"))
        return [
            {"report": self.title, "name": e.name, "formula": e.formula, "value": "" if e.value is None else (e.value if isinstance(e.value, str) else repr(e.value)),
             "inputs": inputs, "note": e.note}
            for e in self.entries
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["report", "name", "formula", "value", "inputs", "note"], lineterminator="\n")
        w.writeheader()
        w.writerows(self.csv_rows())
        return buf.getvalue()


def _number(value):
    if value is None:
        return None
    try:
        x = float(value)
    except OverflowError:
        x = math.inf
    if math.isfinite(x):
        return x
    # beyond double range: keep 20 significant digits as text
    return mpmath.nstr(value, 20) if isinstance(value, mpmath.mpf) else str(value)


def _jsonable(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, int):
        # huge n values stay exact as text, up to the interpreter's digit limit
        if abs(v) < 2**53:
            return v
        try:
            return str(v)
        except ValueError:
            with mpmath.workdps(30):
                return mpmath.nstr(mpmath.mpf(v), 20)
    try:
        return float(v)
    except (TypeError, ValueError):
        return str(v)
