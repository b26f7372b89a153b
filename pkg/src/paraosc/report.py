"""Pass/fail records shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from paraosc.linalg import max_abs

SCHEMA_VERSION = "1.0"

__all__ = ["Check", "Report", "SCHEMA_VERSION", "check_zero"]


@dataclass
class Check:
    relation: str
    status: str  # "pass", "fail", or "note" (informational, never a failure)
    max_residual: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        out = asdict(self)
        if not self.detail:
            out.pop("detail")
        return out


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, relation: str) -> Check:
        for c in self.checks:
            if c.relation == relation:
                return c
        raise KeyError(relation)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def check_zero(ring, relation: str, residual, tol: float = 1e-10, detail: str = "") -> Check:
    """Exact ring: every entry must vanish.  Float ring: max entry <= ``tol``."""
    residual = np.asarray(residual)
    err = max_abs(ring, residual)
    if ring.exact:
        ok = all(ring.is_zero(x) for x in residual.flat)
    else:
        ok = err <= tol
    return Check(relation, "pass" if ok else "fail", err, detail)
