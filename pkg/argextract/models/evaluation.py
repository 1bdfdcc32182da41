"""Evaluation report models."""
from dataclasses import dataclass, field
from typing import Any, Mapping

from argextract.errors import DataError
from argextract.models.argumentation import ArgumentId
from argextract.models.base import BaseModel


@dataclass(frozen=True)
class FidelityReport(BaseModel):
    """Per-agent agreement with logged actions (1 minus mean 0-1 loss)."""

    per_agent: Mapping[int, float]
    step_counts: Mapping[int, int]

    def __post_init__(self) -> None:
        for agent, fraction in self.per_agent.items():
            if not 0.0 <= fraction <= 1.0:
                raise DataError(f"Fidelity {fraction} for agent {agent} outside [0, 1]")
            if self.step_counts.get(agent, 0) <= 0:
                raise DataError(f"Fidelity reported for agent {agent} without evaluated steps")

    @property
    def overall(self) -> float:
        """Step-weighted agreement across agents."""
        total = sum(self.step_counts.values())
        if total == 0:
            return 0.0
        return sum(self.per_agent[a] * self.step_counts[a] for a in self.per_agent) / total

    def render(self) -> str:
        lines = ["agent  steps    fidelity"]
        for agent in sorted(self.per_agent):
            lines.append(f"{agent:<6} {self.step_counts[agent]:<8} {self.per_agent[agent]:.4f}")
        lines.append(f"{'all':<6} {sum(self.step_counts.values()):<8} {self.overall:.4f}")
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        return {
            "per_agent": {str(a): self.per_agent[a] for a in sorted(self.per_agent)},
            "step_counts": {str(a): self.step_counts[a] for a in sorted(self.step_counts)},
            "overall": self.overall,
        }


@dataclass(frozen=True)
class PolicyGrid(BaseModel):
    """Actions at cell centres of a rows x cols grid.

    Rows index the x feature (position), columns the y feature (velocity).
    """

    x_feature: str
    y_feature: str
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    cells: tuple[tuple[str, ...], ...]
    alphabet: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not self.cells or not self.cells[0]:
            raise DataError("Policy grid needs at least one cell")
        width = len(self.cells[0])
        if any(len(row) != width for row in self.cells):
            raise DataError("Policy grid rows differ in length")
        if self.alphabet:
            unknown = {label for row in self.cells for label in row} - self.alphabet
            if unknown:
                raise DataError(f"Policy grid labels {sorted(unknown)} outside the alphabet")

    @property
    def resolution(self) -> tuple[int, int]:
        return len(self.cells), len(self.cells[0])

    def csv_rows(self) -> list[tuple[int, int, str]]:
        return [
            (i, j, label)
            for i, row in enumerate(self.cells)
            for j, label in enumerate(row)
        ]


@dataclass(frozen=True)
class PolicyGridDiff(BaseModel):
    """Cells where two grids of equal resolution disagree."""

    mismatches: tuple[tuple[int, int, str, str], ...] = ()

    @property
    def count(self) -> int:
        return len(self.mismatches)


@dataclass(frozen=True)
class InspectionReport(BaseModel):
    """Top-k primary arguments per agent by descending value."""

    per_agent: Mapping[int, tuple[tuple[ArgumentId, int], ...]]

    def __post_init__(self) -> None:
        for agent, rows in self.per_agent.items():
            values = [value for _, value in rows]
            if any(a <= b for a, b in zip(values, values[1:])):
                raise DataError(f"Inspection rows for agent {agent} are not strictly decreasing")

    def render(self) -> str:
        """Text table with one column per agent."""
        agents = sorted(self.per_agent)
        headers = [f"Agent {agent + 1}" for agent in agents]
        columns = [[argument_id for argument_id, _ in self.per_agent[a]] for a in agents]
        depth = max((len(c) for c in columns), default=0)
        widths = [
            max([len(h)] + [len(x) for x in column]) for h, column in zip(headers, columns)
        ]
        rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
        lines = [rule, "| " + " | ".join(h.ljust(w) for h, w in zip(headers, widths)) + " |", rule]
        for k in range(depth):
            cells = [column[k] if k < len(column) else "" for column in columns]
            lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |")
        lines.append(rule)
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        return {
            str(agent): [{"id": a, "value": v} for a, v in self.per_agent[agent]]
            for agent in sorted(self.per_agent)
        }
