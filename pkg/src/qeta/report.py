"""Structured verification outcomes shared by every suite and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Optional


@dataclass
class Violation:
    index: int
    value: Any


@dataclass
class VerificationReport:
    task: str
    passed: bool
    checked: int = 0
    first_violation: Optional[Violation] = None
    tables: dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    stage: Optional[str] = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.passed and self.first_violation is not None:
            raise ValueError("a passing report cannot carry a violation")

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "pass" if self.passed else "fail"

    @classmethod
    def failure(cls, task: str, index: int, value: Any, checked: int = 0, **kw) -> "VerificationReport":
        return cls(task, False, checked, Violation(index, value), **kw)

    @classmethod
    def errored(cls, task: str, message: str, stage: Optional[str] = None, **kw) -> "VerificationReport":
        return cls(task, False, error=message, stage=stage, **kw)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"task": self.task, "status": self.status, "checked": self.checked}
        if self.first_violation is not None:
            out["first_violation"] = {
                "index": self.first_violation.index,
                "value": _jsonable(self.first_violation.value),
            }
        if self.tables:
            out["tables"] = _jsonable(self.tables)
        if self.stage is not None:
            out["stage"] = self.stage
        if self.error is not None:
            out["error"] = self.error
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def summary(self) -> str:
        line = f"{self.status.upper():5} {self.task} (checked {self.checked})"
        if self.first_violation is not None:
            line += f": first violation at index {self.first_violation.index}, value {self.first_violation.value}"
        if self.stage is not None and not self.passed:
            line += f" [stage {self.stage}]"
        if self.error is not None:
            line += f": {self.error}"
        for w in self.warnings:
            line += f"\n      warning: {w}"
        return line


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        # keep huge coefficients readable by every JSON consumer
        return x if abs(x) < 2**53 else str(x)
    return str(x)


def report_schema() -> dict:
    return json.loads(resources.files("qeta").joinpath("report_schema.json").read_text())
