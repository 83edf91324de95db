"""Verification reports shared by the identity checks and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .errors import VerificationFailure


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool) and abs(x) > 2**53:
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class Report:
    claim: str
    range: str
    status: str = "pass"
    first_failure: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def summary(self) -> str:
        line = f"{self.status.upper():4s}  {self.claim}  [{self.range}]"
        if self.first_failure:
            line += f"  first failure: {_jsonable(self.first_failure)}"
        return line

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"claim": self.claim, "range": self.range, "status": self.status}
        if self.first_failure is not None:
            d["first_failure"] = _jsonable(self.first_failure)
        if self.details:
            d["details"] = _jsonable(self.details)
        return d

    def raise_if_failed(self, strict: bool = True) -> "Report":
        if strict and not self.passed:
            raise VerificationFailure(self)
        return self
