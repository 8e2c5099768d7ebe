"""User-driven relaxation of a relation matrix.

Four edit operations, each validated against the current cell state,
producing a new matrix plus a diff of exactly the changed cells. Diffs
make it transparent which relations an edit touched and drive undo.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import EmptyHistory, MalformedDocument, PreconditionViolated
from .relations import RelationKind, RelationMatrix

_FWD = RelationKind.DIRECT_FORWARD
_BWD = RelationKind.DIRECT_BACKWARD
_PAR = RelationKind.CONCURRENT
_EXC = RelationKind.EXCLUSIVE
_EFWD = RelationKind.EVENTUAL_FORWARD
_EBWD = RelationKind.EVENTUAL_BACKWARD
_FREE = RelationKind.EVENTUAL_BOTH


@dataclass(frozen=True)
class RemoveActivity:
    """Make an activity optional and free to occur anywhere."""

    activity: str


@dataclass(frozen=True)
class Decouple:
    """Drop all ordering between two distinct activities."""

    a: str
    b: str

    def __post_init__(self):
        if self.a == self.b:
            raise PreconditionViolated("decouple needs two distinct activities", op=self)


@dataclass(frozen=True)
class ExclusiveToDirect:
    """Allow b to directly follow a where the cell forbade it."""

    a: str
    b: str


@dataclass(frozen=True)
class DirectToEventual:
    """Weaken a direct relation so the follower may occur later instead."""

    a: str
    b: str


RelaxationOp = Union[RemoveActivity, Decouple, ExclusiveToDirect, DirectToEventual]

RelaxationScript = tuple


@dataclass(frozen=True)
class DiffEntry:
    row: str
    col: str
    old: RelationKind
    new: RelationKind


MatrixDiff = tuple


def apply_op(matrix: RelationMatrix, op: RelaxationOp) -> tuple[RelationMatrix, MatrixDiff]:
    """Apply one relaxation, returning the new matrix and the cell diff.

    Raises PreconditionViolated when the targeted cell state does not
    admit the operation, and UnknownActivity for labels outside the
    alphabet. An operation whose outcome is already in place yields an
    empty diff.
    """
    updates: dict[tuple[str, str], RelationKind] = {}

    if isinstance(op, RemoveActivity):
        x = op.activity
        matrix.index_of(x)
        for other in matrix.activities:
            updates[(x, other)] = _FREE
            updates[(other, x)] = _FREE
    elif isinstance(op, Decouple):
        matrix.index_of(op.a)
        matrix.index_of(op.b)
        updates[(op.a, op.b)] = _FREE
        updates[(op.b, op.a)] = _FREE
    elif isinstance(op, ExclusiveToDirect):
        current = matrix.cell(op.a, op.b)
        if op.a == op.b:
            if current is not _EXC:
                raise _bad_cell(op, current, "needs an exclusive diagonal cell")
            updates[(op.a, op.a)] = _PAR
        elif current is _EXC:
            updates[(op.a, op.b)] = _FWD
            updates[(op.b, op.a)] = _BWD
        elif current is _BWD:
            # The reverse direction is already direct; adding this one
            # makes both orders direct.
            updates[(op.a, op.b)] = _PAR
            updates[(op.b, op.a)] = _PAR
        else:
            raise _bad_cell(op, current, "needs an exclusive or reverse-direct cell")
    elif isinstance(op, DirectToEventual):
        current = matrix.cell(op.a, op.b)
        if current is _FWD:
            updates[(op.a, op.b)] = _EFWD
            updates[(op.b, op.a)] = _EBWD
        elif current is _PAR:
            updates[(op.a, op.b)] = _FREE
            updates[(op.b, op.a)] = _FREE
        else:
            raise _bad_cell(op, current, "needs a direct or concurrent cell")
    else:
        raise TypeError(f"unknown relaxation operation {op!r}")

    changed = {
        pos: kind for pos, kind in updates.items() if matrix.cell(*pos) is not kind
    }
    diff = tuple(
        sorted(
            (DiffEntry(row, col, matrix.cell(row, col), kind) for (row, col), kind in changed.items()),
            key=lambda e: (matrix.index_of(e.row), matrix.index_of(e.col)),
        )
    )
    return matrix.with_cells(changed), diff


def apply_diff(matrix: RelationMatrix, diff: MatrixDiff) -> RelationMatrix:
    return matrix.with_cells({(e.row, e.col): e.new for e in diff})


def revert_diff(matrix: RelationMatrix, diff: MatrixDiff) -> RelationMatrix:
    return matrix.with_cells({(e.row, e.col): e.old for e in diff})


def undo(history: Sequence[tuple[RelationMatrix, MatrixDiff]]) -> RelationMatrix:
    """Matrix state before the most recent applied operation."""
    if not history:
        raise EmptyHistory("nothing to undo")
    return history[-1][0]


def replay(base: RelationMatrix, script: Sequence[RelaxationOp]) -> RelationMatrix:
    """Fold a script over the base matrix, left to right."""
    matrix = base
    for index, op in enumerate(script):
        try:
            matrix, _ = apply_op(matrix, op)
        except PreconditionViolated as exc:
            raise PreconditionViolated(
                f"script step {index}: {exc}", op=op, index=index
            ) from exc
    return matrix


# ---------------------------------------------------------------------------
# Script serialization

_OP_NAMES = {
    RemoveActivity: "remove_activity",
    Decouple: "decouple",
    ExclusiveToDirect: "exclusive_to_direct",
    DirectToEventual: "direct_to_eventual",
}


def op_to_record(op: RelaxationOp) -> dict:
    if isinstance(op, RemoveActivity):
        return {"op": "remove_activity", "a": op.activity}
    return {"op": _OP_NAMES[type(op)], "a": op.a, "b": op.b}


def op_from_record(record: dict) -> RelaxationOp:
    if not isinstance(record, dict) or "op" not in record:
        raise MalformedDocument(f"invalid relaxation record: {record!r}")
    name = record["op"]
    if name == "remove_activity":
        if "a" not in record:
            raise MalformedDocument("remove_activity record needs field 'a'")
        return RemoveActivity(record["a"])
    kinds = {v: k for k, v in _OP_NAMES.items() if k is not RemoveActivity}
    if name not in kinds:
        raise MalformedDocument(f"unknown relaxation op {name!r}")
    if "a" not in record or "b" not in record:
        raise MalformedDocument(f"{name} record needs fields 'a' and 'b'")
    return kinds[name](record["a"], record["b"])


def script_to_json(script: Sequence[RelaxationOp]) -> str:
    return json.dumps([op_to_record(op) for op in script], indent=2) + "\n"


def script_from_json(text: str) -> tuple[RelaxationOp, ...]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid script document: {exc}") from exc
    if not isinstance(payload, list):
        raise MalformedDocument("script document must be a list of op records")
    return tuple(op_from_record(record) for record in payload)


def _bad_cell(op: RelaxationOp, current: RelationKind, requirement: str) -> PreconditionViolated:
    return PreconditionViolated(
        f"{_OP_NAMES[type(op)]} on cell ({getattr(op, 'a', '?')!r}, {getattr(op, 'b', '?')!r}) "
        f"currently {current.code!r}: {requirement}",
        op=op,
    )
