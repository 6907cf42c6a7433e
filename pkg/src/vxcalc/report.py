"""Verification reports: named checks with witnesses, emitted as JSON or text."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    witness: str | None = None

    def as_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "ok": self.ok}
        if self.detail:
            d["detail"] = self.detail
        if not self.ok:
            d["witness"] = self.witness if self.witness is not None else (self.detail or "unspecified")
        return d


def check_from_failures(name: str, failures: list[str], detail: str = "", limit: int = 5) -> Check:
    """One check that passes iff ``failures`` is empty; keeps the first few witnesses."""
    witness = None
    if failures:
        witness = "; ".join(failures[:limit])
        if len(failures) > limit:
            witness += f"; ... ({len(failures)} total)"
    return Check(name, not failures, detail, witness)


@dataclass
class Report:
    command: str
    params: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timing: float | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def as_dict(self) -> dict:
        d: dict[str, Any] = {
            "command": self.command,
            "params": self.params,
            "ok": self.ok,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.data:
            d["data"] = self.data
        if self.timing is not None:
            d["timing_seconds"] = round(self.timing, 3)
        return d


def emit_report(report: Report, fmt: str = "json") -> str:
    """Serialize deterministically (sorted keys, fixed separators)."""
    if fmt == "json":
        return json.dumps(report.as_dict(), sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"{report.command}: {'PASS' if report.ok else 'FAIL'}"]
    if report.params:
        lines.append("  params: " + ", ".join(f"{k}={report.params[k]}" for k in sorted(report.params)))
    for c in report.checks:
        line = f"  [{'PASS' if c.ok else 'FAIL'}] {c.name}"
        if c.detail:
            line += f" ({c.detail})"
        lines.append(line)
        if not c.ok:
            lines.append(f"      witness: {c.witness or c.detail or 'unspecified'}")
    for key in sorted(report.data):
        value = report.data[key]
        if isinstance(value, list):
            lines.append(f"  {key}:")
            lines.extend(f"    {item}" for item in value)
        else:
            lines.append(f"  {key}: {json.dumps(value, sort_keys=True)}")
    if report.timing is not None:
        lines.append(f"  time: {report.timing:.3f}s")
    return "\n".join(lines) + "\n"
