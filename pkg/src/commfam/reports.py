"""Structured check records and machine-readable scenario reports.

A report is a single JSON document with top-level fields
``{scenario, seed, checks, duration_ms, version}``; each check record carries
``{name, anchor, status, witness}`` where ``anchor`` is the mathematical
identity the check decides, ``status`` is one of ``pass`` / ``fail`` /
``skipped``, and ``witness`` serialises the first counterexample on failure
(or the reason on a skip).  Identical scenario inputs produce byte-identical
reports apart from ``duration_ms``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckRecord:
    name: str
    anchor: str
    status: str
    witness: str | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "anchor": self.anchor,
                "status": self.status, "witness": self.witness}

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(name=d["name"], anchor=d["anchor"],
                   status=d["status"], witness=d.get("witness"))


def passed(name: str, anchor: str) -> CheckRecord:
    return CheckRecord(name, anchor, PASS)


def failed(name: str, anchor: str, witness: str) -> CheckRecord:
    return CheckRecord(name, anchor, FAIL, witness)


def skipped(name: str, anchor: str, reason: str) -> CheckRecord:
    return CheckRecord(name, anchor, SKIPPED, reason)


@dataclass
class Report:
    scenario: dict
    seed: int
    checks: list[CheckRecord] = field(default_factory=list)
    duration_ms: int = 0
    version: str = ""

    def all_passed(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] = out.get(c.status, 0) + 1
        return out

    def to_json(self) -> str:
        doc = {
            "scenario": self.scenario,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "duration_ms": self.duration_ms,
            "version": self.version,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        doc = json.loads(text)
        return cls(
            scenario=doc["scenario"],
            seed=doc["seed"],
            checks=[CheckRecord.from_dict(c) for c in doc["checks"]],
            duration_ms=doc["duration_ms"],
            version=doc["version"],
        )


def emit_report(report: Report, path) -> None:
    """Write ``report`` as JSON; raises OSError when the path is unwritable."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(report.to_json())
        handle.write("\n")


def parse_report(path) -> Report:
    with open(path, "r", encoding="utf-8") as handle:
        return Report.from_json(handle.read())
