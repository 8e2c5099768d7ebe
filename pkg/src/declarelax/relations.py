"""Behavioral relations: directly-follows derivation and the relation matrix.

The matrix assigns every ordered activity pair one of seven relation
kinds. A freshly derived matrix only uses the four alpha relations
(direct forward/backward, concurrent, exclusive); the eventual kinds
appear through relaxation.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import MalformedDocument, UnknownActivity
from .wfnet import Marking, ReachabilityGraph, WorkflowNet

Pair = tuple[str, str]


class RelationKind(Enum):
    DIRECT_FORWARD = "->"
    DIRECT_BACKWARD = "<-"
    CONCURRENT = "||"
    EXCLUSIVE = "-"
    EVENTUAL_FORWARD = "<"
    EVENTUAL_BACKWARD = ">"
    EVENTUAL_BOTH = "<>"

    @property
    def code(self) -> str:
        return self.value

    @property
    def mirror(self) -> "RelationKind":
        return _MIRROR[self]

    @classmethod
    def from_code(cls, code: str) -> "RelationKind":
        try:
            return cls(code)
        except ValueError:
            raise MalformedDocument(f"unknown relation symbol {code!r}") from None


_MIRROR = {
    RelationKind.DIRECT_FORWARD: RelationKind.DIRECT_BACKWARD,
    RelationKind.DIRECT_BACKWARD: RelationKind.DIRECT_FORWARD,
    RelationKind.EVENTUAL_FORWARD: RelationKind.EVENTUAL_BACKWARD,
    RelationKind.EVENTUAL_BACKWARD: RelationKind.EVENTUAL_FORWARD,
    RelationKind.CONCURRENT: RelationKind.CONCURRENT,
    RelationKind.EXCLUSIVE: RelationKind.EXCLUSIVE,
    RelationKind.EVENTUAL_BOTH: RelationKind.EVENTUAL_BOTH,
}

# Kinds an activity may have with itself.
DIAGONAL_KINDS = frozenset(
    {RelationKind.EXCLUSIVE, RelationKind.CONCURRENT, RelationKind.EVENTUAL_BOTH}
)


@dataclass(frozen=True)
class RelationMatrix:
    """Square matrix over an ordered activity alphabet.

    Mirror symmetry holds between cell(a, b) and cell(b, a); diagonal
    cells are restricted to exclusive, concurrent, or eventual-both.
    """

    activities: tuple[str, ...]
    cells: tuple[tuple[RelationKind, ...], ...]

    def __post_init__(self):
        n = len(self.activities)
        if len(set(self.activities)) != n:
            raise ValueError("duplicate activity in matrix alphabet")
        if len(self.cells) != n or any(len(row) != n for row in self.cells):
            raise ValueError("matrix is not square over its alphabet")
        for i in range(n):
            if self.cells[i][i] not in DIAGONAL_KINDS:
                raise ValueError(
                    f"diagonal cell for {self.activities[i]!r} is {self.cells[i][i].code!r}"
                )
            for j in range(i + 1, n):
                if self.cells[i][j] != self.cells[j][i].mirror:
                    raise ValueError(
                        f"cells ({self.activities[i]!r}, {self.activities[j]!r}) break mirror symmetry"
                    )

    @cached_property
    def _index(self) -> Mapping[str, int]:
        return {a: i for i, a in enumerate(self.activities)}

    def index_of(self, activity: str) -> int:
        try:
            return self._index[activity]
        except KeyError:
            raise UnknownActivity(f"unknown activity {activity!r}") from None

    def cell(self, row: str, col: str) -> RelationKind:
        return self.cells[self.index_of(row)][self.index_of(col)]

    def with_cells(self, updates: Mapping[Pair, RelationKind]) -> "RelationMatrix":
        """Return a copy with the given (row, col) cells replaced."""
        rows = [list(row) for row in self.cells]
        for (a, b), kind in updates.items():
            rows[self.index_of(a)][self.index_of(b)] = kind
        return RelationMatrix(self.activities, tuple(tuple(row) for row in rows))

    def relations_equal(self, other: "RelationMatrix") -> bool:
        """Equality up to activity ordering."""
        if set(self.activities) != set(other.activities):
            return False
        return all(
            self.cell(a, b) == other.cell(a, b)
            for a in self.activities
            for b in self.activities
        )

    def to_json(self) -> str:
        payload = {
            "activities": list(self.activities),
            "cells": [[kind.code for kind in row] for row in self.cells],
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RelationMatrix":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"invalid matrix document: {exc}") from exc
        if (
            not isinstance(payload, dict)
            or "activities" not in payload
            or "cells" not in payload
        ):
            raise MalformedDocument("matrix document needs 'activities' and 'cells' fields")
        activities = tuple(payload["activities"])
        rows = tuple(
            tuple(RelationKind.from_code(code) for code in row) for row in payload["cells"]
        )
        try:
            return cls(activities, rows)
        except ValueError as exc:
            raise MalformedDocument(str(exc)) from exc


def derive_directly_follows(net: WorkflowNet, graph: ReachabilityGraph) -> frozenset[Pair]:
    """Directly-follows pairs of the net, with silent transitions erased.

    (a, b) is in the result iff some reachable firing sequence fires the
    transition labeled a, then zero or more silent transitions, then the
    transition labeled b. Expects the reachability graph produced by
    check_soundness on a sound, free-choice net.
    """
    by_id = net.transition_by_id
    next_labels: dict[Marking, frozenset[str]] = {}

    def labels_reachable_silently(marking: Marking) -> frozenset[str]:
        if marking in next_labels:
            return next_labels[marking]
        found: set[str] = set()
        seen = {marking}
        queue = deque([marking])
        while queue:
            m = queue.popleft()
            for tid, nxt in graph.successors(m):
                label = by_id[tid].label
                if label is not None:
                    found.add(label)
                elif nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        result = frozenset(found)
        next_labels[marking] = result
        return result

    pairs: set[Pair] = set()
    for marking in graph.markings:
        for tid, nxt in graph.successors(marking):
            label = by_id[tid].label
            if label is None:
                continue
            for follower in labels_reachable_silently(nxt):
                pairs.add((label, follower))
    return frozenset(pairs)


def build_matrix(pairs: Iterable[Pair], activities: Sequence[str]) -> RelationMatrix:
    """Assemble the alpha-relation matrix from directly-follows pairs."""
    activities = tuple(activities)
    known = set(activities)
    pair_set = set(pairs)
    for a, b in pair_set:
        if a not in known or b not in known:
            missing = a if a not in known else b
            raise UnknownActivity(f"pair references unknown activity {missing!r}")

    rows = []
    for a in activities:
        row = []
        for b in activities:
            forward = (a, b) in pair_set
            backward = (b, a) in pair_set
            if a == b:
                row.append(RelationKind.CONCURRENT if forward else RelationKind.EXCLUSIVE)
            elif forward and backward:
                row.append(RelationKind.CONCURRENT)
            elif forward:
                row.append(RelationKind.DIRECT_FORWARD)
            elif backward:
                row.append(RelationKind.DIRECT_BACKWARD)
            else:
                row.append(RelationKind.EXCLUSIVE)
        rows.append(tuple(row))
    return RelationMatrix(activities, tuple(rows))


def derive_matrix(net: WorkflowNet, graph: ReachabilityGraph) -> RelationMatrix:
    """Derive the relation matrix for a net (activities sorted by label)."""
    pairs = derive_directly_follows(net, graph)
    return build_matrix(pairs, sorted(net.labels))


def transitive_closure(pairs: Iterable[Pair]) -> frozenset[Pair]:
    """All (p, q) linked by one or more directly-follows steps."""
    successors: dict[str, set[str]] = {}
    for a, b in pairs:
        successors.setdefault(a, set()).add(b)

    closed: set[Pair] = set()
    for start in successors:
        seen: set[str] = set()
        queue = deque(successors[start])
        while queue:
            node = queue.popleft()
            if node in seen:
                continue
            seen.add(node)
            queue.extend(successors.get(node, ()))
        closed.update((start, node) for node in seen)
    return frozenset(closed)
