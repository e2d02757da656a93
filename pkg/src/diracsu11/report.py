"""Structured pass/fail records for identity checks."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable

REPORT_VERSION = "1.0"


@dataclass(frozen=True)
class CheckEntry:
    check_name: str
    parameters: dict[str, Any]
    measured_error: float
    tolerance: float
    passed: bool


@dataclass
class VerificationReport:
    entries: list[CheckEntry] = field(default_factory=list)

    def add(self, check_name: str, parameters: dict[str, Any], measured_error: float, tolerance: float) -> CheckEntry:
        # NaN must never count as a pass
        passed = bool(measured_error <= tolerance)
        entry = CheckEntry(check_name, dict(parameters), float(measured_error), float(tolerance), passed)
        self.entries.append(entry)
        return entry

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def by_name(self, check_name: str) -> list[CheckEntry]:
        return [e for e in self.entries if e.check_name == check_name]

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.entries.extend(other.entries)
        return self

    @classmethod
    def merge(cls, reports: Iterable["VerificationReport"]) -> "VerificationReport":
        """Concatenate reports in a canonical order, independent of input order."""
        entries = [e for r in reports for e in r.entries]
        entries.sort(key=lambda e: (e.check_name, json.dumps(e.parameters, sort_keys=True, default=str)))
        return cls(entries)

    def to_dict(self, parameters: dict[str, Any] | None = None) -> dict[str, Any]:
        return {
            "version": REPORT_VERSION,
            "parameters": dict(parameters or {}),
            "entries": [asdict(e) for e in self.entries],
            "passed": self.passed,
        }

    def __len__(self) -> int:
        return len(self.entries)
