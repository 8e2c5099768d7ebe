"""Branched-Declare constraint generation from a relation matrix.

The matrix is first split into a directly-follows pair set D (direct and
concurrent cells) and an eventually-follows pair set E (directed eventual
cells). Generation then emits one Init constraint for the start
activities, a ChainResponse per D-source over its successor set,
AlternateResponse constraints for concurrent successor pairs (skipping
bypassable activities), and AlternateResponse constraints for E-pairs not
already implied by the transitive closure of D.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable

from .errors import EmptyAlphabet, MalformedDocument
from .relations import Pair, RelationKind, RelationMatrix, transitive_closure


class Template(Enum):
    INIT = "Init"
    CHAIN_RESPONSE = "ChainResponse"
    ALTERNATE_RESPONSE = "AlternateResponse"


@dataclass(frozen=True)
class Constraint:
    """A branched-Declare constraint over activity sets.

    Init carries only a target set (the permitted start activities);
    the binary templates carry a source (activation) set and a target set.
    """

    template: Template
    target: frozenset[str]
    source: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.target:
            raise ValueError("constraint target set must be non-empty")
        if self.template is Template.INIT:
            if self.source:
                raise ValueError("Init carries a single activity set")
        elif not self.source:
            raise ValueError(f"{self.template.value} needs a non-empty source set")

    def describe(self) -> str:
        target = "{" + ", ".join(sorted(self.target)) + "}"
        if self.template is Template.INIT:
            return f"Init({target})"
        source = "{" + ", ".join(sorted(self.source)) + "}"
        return f"{self.template.value}({source}, {target})"

    def sort_key(self):
        order = {Template.INIT: 0, Template.CHAIN_RESPONSE: 1, Template.ALTERNATE_RESPONSE: 2}
        return (order[self.template], sorted(self.source), sorted(self.target))


def init(activities: Iterable[str]) -> Constraint:
    return Constraint(Template.INIT, frozenset(activities))


def chain_response(source: Iterable[str], target: Iterable[str]) -> Constraint:
    return Constraint(Template.CHAIN_RESPONSE, frozenset(target), frozenset(source))


def alternate_response(source: Iterable[str], target: Iterable[str]) -> Constraint:
    return Constraint(Template.ALTERNATE_RESPONSE, frozenset(target), frozenset(source))


def extract_relations(matrix: RelationMatrix) -> tuple[frozenset[Pair], frozenset[Pair]]:
    """Split the matrix into directly-follows and eventually-follows pairs.

    Direct and concurrent cells contribute to D (concurrent cells in both
    directions, diagonal concurrency as a self-pair); directed eventual
    cells contribute to E. Exclusive and undirected-eventual cells
    contribute nothing.
    """
    direct: set[Pair] = set()
    eventual: set[Pair] = set()
    for a in matrix.activities:
        for b in matrix.activities:
            kind = matrix.cell(a, b)
            if kind is RelationKind.DIRECT_FORWARD or kind is RelationKind.CONCURRENT:
                direct.add((a, b))
            elif kind is RelationKind.EVENTUAL_FORWARD:
                eventual.add((a, b))
    return frozenset(direct), frozenset(eventual)


def get_start_activities(direct: Iterable[Pair], alphabet: Iterable[str]) -> frozenset[str]:
    """Activities that never appear as a successor."""
    successors = {b for _, b in direct}
    return frozenset(a for a in alphabet if a not in successors)


def is_optional_activity(x: str, direct: Iterable[Pair]) -> bool:
    """Bypass test: can some predecessor reach some successor around x?

    True iff there is a predecessor a and a successor b of x, neither in a
    concurrency relation with x or each other, with a direct edge a -> b
    that skips x.
    """
    pairs = set(direct)
    predecessors = {a for a, b in pairs if b == x}
    successors = {b for a, b in pairs if a == x}
    for a in predecessors:
        if (x, a) in pairs:
            continue
        for b in successors:
            if (b, x) in pairs or (b, a) in pairs:
                continue
            if (a, b) in pairs:
                return True
    return False


def generate_constraints(
    direct: Iterable[Pair],
    eventual: Iterable[Pair],
    alphabet: Iterable[str],
) -> frozenset[Constraint]:
    """Generate the branched-Declare constraint set for (D, E).

    Emits Init over the start activities (skipped when every activity is
    some successor, since an empty Init set could never be satisfied),
    a ChainResponse per source, AlternateResponse constraints for
    mutually-concurrent successors that cannot be bypassed, and
    AlternateResponse constraints for eventual successors outside the
    transitive closure of D.
    """
    alphabet = frozenset(alphabet)
    if not alphabet:
        raise EmptyAlphabet("constraint generation needs a non-empty alphabet")
    pairs_d = frozenset(direct)
    pairs_e = frozenset(eventual)

    out: set[Constraint] = set()

    start = get_start_activities(pairs_d, alphabet)
    if start:
        out.add(init(start))

    closure = transitive_closure(pairs_d)
    sources = {a for a, _ in pairs_d}
    for a in sources:
        followers = frozenset(b for x, b in pairs_d if x == a)
        out.add(chain_response({a}, followers))
        for b, c in combinations(sorted(followers), 2):
            if (b, c) in pairs_d and (c, b) in pairs_d:
                if not is_optional_activity(b, pairs_d):
                    out.add(alternate_response({a}, {b}))
                if not is_optional_activity(c, pairs_d):
                    out.add(alternate_response({a}, {c}))

    for a in {a for a, _ in pairs_e}:
        pending = frozenset(
            b for x, b in pairs_e if x == a and (a, b) not in closure
        )
        if pending:
            out.add(alternate_response({a}, pending))

    return frozenset(out)


def constraints_for_matrix(matrix: RelationMatrix) -> frozenset[Constraint]:
    direct, eventual = extract_relations(matrix)
    return generate_constraints(direct, eventual, matrix.activities)


# ---------------------------------------------------------------------------
# Constraint file format


def ordered(constraints: Iterable[Constraint]) -> list[Constraint]:
    return sorted(constraints, key=Constraint.sort_key)


def constraints_to_json(constraints: Iterable[Constraint]) -> str:
    records = []
    for c in ordered(constraints):
        record: dict = {"template": c.template.value}
        if c.template is not Template.INIT:
            record["source"] = sorted(c.source)
        record["target"] = sorted(c.target)
        records.append(record)
    return json.dumps(records, indent=2) + "\n"


def constraints_from_json(text: str) -> frozenset[Constraint]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid constraint document: {exc}") from exc
    if not isinstance(payload, list):
        raise MalformedDocument("constraint document must be a list of records")
    out = []
    for record in payload:
        if not isinstance(record, dict) or "template" not in record or "target" not in record:
            raise MalformedDocument(f"invalid constraint record: {record!r}")
        try:
            template = Template(record["template"])
        except ValueError:
            raise MalformedDocument(f"unknown template {record['template']!r}") from None
        try:
            out.append(
                Constraint(
                    template,
                    frozenset(record["target"]),
                    frozenset(record.get("source", ())),
                )
            )
        except ValueError as exc:
            raise MalformedDocument(str(exc)) from exc
    return frozenset(out)
