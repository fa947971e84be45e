"""morphsample - Pydantic models for reports and results."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

Status = Literal["pass", "fail", "premise-unmet"]


def _fmt(value: int | None) -> str:
    return "-" if value is None else str(value)


# --- Witnesses ---


class Witness(BaseModel):
    """A concrete point where a relation or condition breaks."""

    x: tuple[int, ...] | None = None
    lhs: int | None = None  # None means undefined at x
    rhs: int | None = None
    note: str | None = None

    def render(self) -> str:
        parts = ["witness"]
        if self.x is not None:
            parts.append(f"x=({','.join(str(c) for c in self.x)})")
            parts.append(f"lhs={_fmt(self.lhs)}")
            parts.append(f"rhs={_fmt(self.rhs)}")
        if self.note:
            parts.append(self.note)
        return " ".join(parts)


# --- Sampling condition reports ---


class ConditionResult(BaseModel):
    """One numbered sampling condition."""

    condition: str  # roman numeral
    description: str
    passed: bool
    witness: Witness | None = None


class ConditionReport(BaseModel):
    """Outcome of validating a sieve against a structuring element."""

    kind: Literal["binary", "grey"]
    conditions: list[ConditionResult] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def failed(self) -> list[ConditionResult]:
        return [c for c in self.conditions if not c.passed]

    def render(self) -> str:
        lines = []
        for c in self.conditions:
            line = f"CONDITION {c.condition} {'pass' if c.passed else 'fail'} {c.description}"
            if c.witness is not None:
                line += f" {c.witness.render()}"
            lines.append(line)
        lines.extend(f"WARNING {w}" for w in self.warnings)
        lines.append(f"VALID {'yes' if self.passed else 'no'}")
        return "\n".join(lines)


# --- Relation results ---


class RelationResult(BaseModel):
    """Outcome of one relation on one input."""

    predicate: str
    status: Status
    witness: Witness | None = None

    def render(self) -> str:
        line = f"RESULT {self.predicate} {self.status}"
        if self.witness is not None:
            line += f" {self.witness.render()}"
        return line


class RelationReport(BaseModel):
    """All parts of a (possibly multi-part) relation predicate."""

    predicate: str
    results: list[RelationResult] = Field(default_factory=list)

    @property
    def status(self) -> Status:
        statuses = {r.status for r in self.results}
        if "fail" in statuses:
            return "fail"
        if "pass" in statuses:
            return "pass"
        return "premise-unmet"

    @property
    def witness(self) -> Witness | None:
        for r in self.results:
            if r.status == "fail":
                return r.witness
        return None

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def render(self) -> str:
        return "\n".join(r.render() for r in self.results)
