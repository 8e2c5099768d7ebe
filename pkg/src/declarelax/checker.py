"""Constraint evaluation over traces and log-level conformance reports.

evaluate_constraint is the reference evaluator: a direct reading of the
finite-trace semantics, returning every violating activation position.
check_log batches verdicts through the integer-coded kernels and uses the
reference evaluator only to list positions for violated pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _kernels
from .constraints import Constraint, Template, ordered
from .errors import EmptyLog
from .eventlog import Trace


@dataclass(frozen=True)
class ConstraintVerdict:
    constraint: Constraint
    violations: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class TraceResult:
    case_id: str
    verdicts: tuple[ConstraintVerdict, ...]

    @property
    def conforms(self) -> bool:
        return all(v.holds for v in self.verdicts)


@dataclass(frozen=True)
class ConformanceReport:
    results: tuple[TraceResult, ...]
    constraints: tuple[Constraint, ...]

    @property
    def total_traces(self) -> int:
        return len(self.results)

    @property
    def conforming_traces(self) -> int:
        return sum(1 for r in self.results if r.conforms)

    @property
    def conformance_rate(self) -> float:
        return self.conforming_traces / self.total_traces

    def violated_cases(self, constraint: Constraint) -> frozenset[str]:
        return frozenset(
            r.case_id
            for r in self.results
            for v in r.verdicts
            if v.constraint == constraint and not v.holds
        )

    def to_json(self) -> str:
        summary = []
        for c in self.constraints:
            violated = sum(
                1
                for r in self.results
                for v in r.verdicts
                if v.constraint == c and not v.holds
            )
            summary.append({"constraint": c.describe(), "violated_traces": violated})
        payload = {
            "conformance_rate": round(self.conformance_rate, 3),
            "total_traces": self.total_traces,
            "conforming_traces": self.conforming_traces,
            "constraints": summary,
            "traces": [
                {
                    "case_id": r.case_id,
                    "conforms": r.conforms,
                    "violations": [
                        {
                            "constraint": v.constraint.describe(),
                            "positions": list(v.violations),
                        }
                        for v in r.verdicts
                        if not v.holds
                    ],
                }
                for r in self.results
            ],
        }
        return json.dumps(payload, indent=2) + "\n"


def evaluate_constraint(trace: Trace, constraint: Constraint) -> ConstraintVerdict:
    """Evaluate one constraint on one trace.

    Violation positions are 0-based indexes of the activating event
    (index 0 for a failed Init).
    """
    labels = trace.activities
    source = constraint.source
    target = constraint.target
    positions: list[int] = []

    if constraint.template is Template.INIT:
        if labels and labels[0] not in target:
            positions.append(0)
    elif constraint.template is Template.CHAIN_RESPONSE:
        last = len(labels) - 1
        for i, label in enumerate(labels):
            if label in source and (i == last or labels[i + 1] not in target):
                positions.append(i)
    elif constraint.template is Template.ALTERNATE_RESPONSE:
        for i, label in enumerate(labels):
            if label not in source:
                continue
            satisfied = False
            for j in range(i + 1, len(labels)):
                if labels[j] in target:
                    satisfied = True
                    break
                if labels[j] in source:
                    break
            if not satisfied:
                positions.append(i)
    else:  # pragma: no cover - template enum is closed
        raise ValueError(f"unknown template {constraint.template!r}")

    return ConstraintVerdict(constraint, tuple(positions))


def check_log(
    traces: Sequence[Trace],
    constraints: Iterable[Constraint],
    engine: str | None = None,
) -> ConformanceReport:
    """Evaluate every constraint on every trace and aggregate the rate.

    The verdict matrix comes from the selected kernel engine; violation
    positions for the violated pairs come from the reference evaluator.
    """
    if not traces:
        raise EmptyLog("conformance checking needs at least one trace")
    constraint_list = ordered(constraints)

    alphabet: set[str] = set()
    for c in constraint_list:
        alphabet.update(c.source)
        alphabet.update(c.target)
    encoded = _kernels.encode_log(traces, sorted(alphabet))

    counts_by_constraint = []
    for c in constraint_list:
        counts = _kernels.violation_counts(
            encoded,
            c.template.value,
            _kernels.label_mask(c.source, encoded.label_index),
            _kernels.label_mask(c.target, encoded.label_index),
            engine=engine,
        )
        counts_by_constraint.append(counts)

    results = []
    for t_index, trace in enumerate(traces):
        verdicts = []
        for c_index, c in enumerate(constraint_list):
            if counts_by_constraint[c_index][t_index]:
                verdicts.append(evaluate_constraint(trace, c))
            else:
                verdicts.append(ConstraintVerdict(c, ()))
        results.append(TraceResult(trace.case_id, tuple(verdicts)))

    return ConformanceReport(tuple(results), tuple(constraint_list))
