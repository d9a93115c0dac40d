"""Report values shared by the CLI and the verification suites.

Reports serialize to JSON with a fixed field order and no volatile fields
(timing is kept out of the payload), so identical seeds and inputs produce
byte-identical report files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckEntry:
    name: str
    status: str                 # "pass" | "fail" | "unknown"
    residual: float | None = None
    witness: object = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.residual is not None:
            out["residual"] = self.residual
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    payload: dict | None = None   # command output (category JSON etc.)

    def add(self, name, status, residual=None, witness=None, detail=""):
        self.checks.append(CheckEntry(name, status, residual, witness, detail))

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.checks}
        if "fail" in statuses:
            return "fail"
        if "unknown" in statuses:
            return "unknown"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "unknown": 3}[self.status]

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "status": self.status,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.payload is not None:
            out["payload"] = self.payload
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"
