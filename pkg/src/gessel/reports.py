"""Uniform result records for checks run from the CLI and the test suite."""

from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any

__all__ = ["VerificationReport", "CriterionResult", "timed", "numeric", "exact", "to_json"]

EXACT = "exact"


@dataclass
class VerificationReport:
    check_name: str
    parameters: dict[str, Any]
    residual: float | str
    tolerance: float | str
    passed: bool
    runtime_ms: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return _jsonable(d)

    def line(self) -> str:
        res = self.residual if isinstance(self.residual, str) else f"{self.residual:.3e}"
        tol = self.tolerance if isinstance(self.tolerance, str) else f"{self.tolerance:.0e}"
        params = " ".join(f"{k}={v}" for k, v in self.parameters.items())
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.check_name:<40} residual={res:<10} tol={tol:<6} {params}"


def numeric(name, residual, tolerance, runtime_ms=0, **parameters) -> VerificationReport:
    residual = float(residual)
    ok = math.isfinite(residual) and residual <= tolerance
    return VerificationReport(name, parameters, residual, tolerance, ok, int(runtime_ms))


def exact(name, ok: bool, runtime_ms=0, details=None, **parameters) -> VerificationReport:
    return VerificationReport(name, parameters, EXACT, EXACT, bool(ok), int(runtime_ms), details or {})


@dataclass
class CriterionResult:
    number: int
    title: str
    reports: list[VerificationReport]
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        worst = [r for r in self.reports if not r.passed]
        extra = f"  ({len(worst)} failing: {worst[0].check_name})" if worst else ""
        note = f"  [{self.note}]" if self.note else ""
        return f"criterion {self.number:>2}: {status}  {self.title}{extra}{note}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "pass": self.passed,
            "note": self.note,
            "reports": [r.to_dict() for r in self.reports],
        }


class Timer:
    def __init__(self):
        self.ms = 0


@contextmanager
def timed():
    t = Timer()
    start = time.perf_counter()
    try:
        yield t
    finally:
        t.ms = int(round((time.perf_counter() - start) * 1000))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return obj.real if obj.imag == 0 else {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if hasattr(obj, "item"):  # numpy scalars
        return _jsonable(obj.item())
    return str(obj)


def to_json(obj, **kw) -> str:
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    elif isinstance(obj, list):
        obj = [o.to_dict() if hasattr(o, "to_dict") else o for o in obj]
    return json.dumps(_jsonable(obj), **kw)
