"""Structured verdicts shared by every check, the CLI and the example registry."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

STATUSES = ("pass", "fail", "unknown", "error")
SCHEMA_VERSION = "1"


def _text(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_text(v) for v in value) + "]"
    return str(value)


@dataclass
class Report:
    """Verdict of one task.

    ``witnesses`` are ``(name, value)`` pairs printed canonically; a failing
    report always carries at least one.  ``checks`` holds named sub-verdicts
    for bundled tasks.
    """

    id: str
    kind: str
    status: str
    witnesses: list[tuple[str, str]] = field(default_factory=list)
    anchors: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    checks: list["Report"] = field(default_factory=list)
    elapsed: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        self.witnesses = [(str(n), _text(v)) for n, v in self.witnesses]
        if self.status == "fail" and not self.witnesses:
            raise ValueError("a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def witness(self, name: str) -> str | None:
        for n, v in self.witnesses:
            if n == name:
                return v
        return None

    def add(self, name: str, value) -> "Report":
        self.witnesses.append((name, _text(value)))
        return self

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "witnesses": [{"name": n, "value": v} for n, v in self.witnesses],
            "anchors": list(self.anchors),
        }
        if self.notes:
            d["notes"] = list(self.notes)
        if self.checks:
            d["checks"] = [c.to_dict(timing) for c in self.checks]
        if timing:
            d["elapsed"] = round(self.elapsed, 6)
        return d

    def to_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}[{self.status.upper()}] {self.id} ({self.kind})"]
        for n, v in self.witnesses:
            lines.append(f"{pad}    {n} = {v}")
        for a in self.anchors:
            lines.append(f"{pad}    anchor: {a}")
        for note in self.notes:
            lines.append(f"{pad}    note: {note}")
        for c in self.checks:
            lines.append(c.to_text(indent + 1))
        return "\n".join(lines)


def combine(reports: Iterable[Report]) -> str:
    """Aggregate status: error > fail > unknown > pass."""
    statuses = {r.status for r in reports}
    for s in ("error", "fail", "unknown"):
        if s in statuses:
            return s
    return "pass"


def bundle(id: str, kind: str, checks: list[Report], anchors=(), notes=()) -> Report:
    status = combine(checks)
    witnesses = []
    if status == "fail":
        witnesses = [("failed", ", ".join(c.id for c in checks if c.status == "fail"))]
    return Report(id, kind, status, witnesses, list(anchors), list(notes), checks,
                  sum(c.elapsed for c in checks))


def check(id: str, ok: bool, witnesses=(), kind: str = "check", anchors=(), notes=()) -> Report:
    """A pass/fail sub-check; failures get a default witness when none is given."""
    witnesses = list(witnesses)
    if not ok and not witnesses:
        witnesses = [("violation", id)]
    return Report(id, kind, "pass" if ok else "fail", witnesses, list(anchors), list(notes))


def to_json(reports: list[Report], timing: bool = True) -> str:
    doc = {"version": SCHEMA_VERSION, "tasks": [r.to_dict(timing) for r in reports]}
    doc["summary"] = summary(reports)
    return json.dumps(doc, indent=2, ensure_ascii=False)


def summary(reports: list[Report]) -> dict:
    counts = {s: 0 for s in STATUSES}
    for r in reports:
        counts[r.status] += 1
    return counts


def exit_code(reports: list[Report], allow_unknown: bool = False) -> int:
    s = combine(reports)
    if s == "error":
        return 2
    if s == "fail":
        return 1
    if s == "unknown" and not allow_unknown:
        return 3
    return 0
