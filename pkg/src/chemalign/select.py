"""Upstream dataset ranking and the pretraining budget model.

Given moment summaries for candidate upstream datasets and one downstream
target, rank the candidates by their distribution distance to the target
and select the argmin. The budget model treats total compute as the
product of epochs and unique samples, so a fixed budget trades dataset
size against passes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import InsufficientDataError
from .frechet import CsiValue, csi
from .stats import DatasetSummary


@dataclass(frozen=True)
class BudgetSpec:
    """Total pretraining compute as epochs times unique samples."""

    epochs: int
    samples: int

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")

    @property
    def budget(self) -> int:
        return self.epochs * self.samples

    def to_json(self) -> dict:
        return {"epochs": self.epochs, "samples": self.samples, "budget": self.budget}


def make_budget(epochs: int, samples: int) -> BudgetSpec:
    return BudgetSpec(epochs=int(epochs), samples=int(samples))


def plan_samples(budget: int, epochs: int) -> int:
    """Unique samples N that spend `budget` exactly in `epochs` passes.

    Refuses to round: a budget that epochs does not divide is a planning
    error, not a hint.
    """
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if budget % epochs != 0:
        raise ValueError(f"epochs {epochs} does not divide budget {budget}")
    return budget // epochs


def budget_ratio(a: BudgetSpec, b: BudgetSpec) -> float:
    if b.budget <= 0:
        raise ValueError(f"reference budget must be positive, got {b.budget}")
    return a.budget / b.budget


@dataclass(frozen=True)
class AlignmentReport:
    """Upstream candidates ordered by distance to one downstream target."""

    downstream: str
    ranked: tuple[tuple[str, CsiValue], ...]
    budget: BudgetSpec | None = None

    def __post_init__(self) -> None:
        if not self.ranked:
            raise InsufficientDataError("report needs at least one upstream")
        values = [v.value for _, v in self.ranked]
        if any(b < a for a, b in zip(values, values[1:])):
            raise ValueError("ranked entries are not sorted ascending")

    @property
    def selected(self) -> str:
        return self.ranked[0][0]

    def to_json(self) -> dict:
        return {
            "downstream": self.downstream,
            "ranked": [
                {
                    "name": name,
                    "value": v.value,
                    "mean_term": v.mean_term,
                    "trace_term": v.trace_term,
                }
                for name, v in self.ranked
            ],
            "selected": self.selected,
            "budget": self.budget.to_json() if self.budget else None,
        }

    def render_table(self) -> str:
        width = max(len(name) for name, _ in self.ranked)
        width = max(width, len("upstream"))
        lines = [f"downstream: {self.downstream}"]
        lines.append(f"{'rank':>4}  {'upstream':<{width}}  {'csi':>12}  {'mean':>12}  {'trace':>12}")
        for i, (name, v) in enumerate(self.ranked, start=1):
            lines.append(
                f"{i:>4}  {name:<{width}}  {v.value:>12.6g}  {v.mean_term:>12.6g}  {v.trace_term:>12.6g}"
            )
        lines.append(f"selected: {self.selected}")
        if self.budget is not None:
            b = self.budget
            lines.append(f"budget: {b.budget} = {b.epochs} epochs x {b.samples} samples")
        return "\n".join(lines)


def rank_upstreams(
    upstream: list[DatasetSummary],
    downstream: DatasetSummary,
    budget: BudgetSpec | None = None,
    ridge: float = 0.0,
) -> AlignmentReport:
    """Rank upstream summaries by distance to the downstream summary.

    Ascending, ties broken by input order. The first entry is the
    selection.
    """
    if not upstream:
        raise InsufficientDataError("need at least one upstream summary")
    scored = [(u.name, csi(u, downstream, ridge=ridge)) for u in upstream]
    scored.sort(key=lambda pair: pair[1].value)
    return AlignmentReport(downstream=downstream.name, ranked=tuple(scored), budget=budget)


def write_report(report: AlignmentReport, path: str | Path, extra: dict | None = None) -> None:
    doc = report.to_json()
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
