"""Exception types shared across the toolchain."""

from __future__ import annotations


class DeclarelaxError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class MalformedDocument(DeclarelaxError):
    """The input document is not in the supported format."""

    code = "malformed_document"


class NotAWorkflowNet(DeclarelaxError):
    """The net violates a structural workflow-net requirement."""

    code = "not_a_workflow_net"

    def __init__(self, message: str, offending: str | None = None):
        super().__init__(message)
        self.offending = offending


class DuplicateLabel(DeclarelaxError):
    """Two non-silent transitions carry the same activity label."""

    code = "duplicate_label"


class StateSpaceExceeded(DeclarelaxError):
    """Reachability exploration hit the configured marking limit."""

    code = "state_space_exceeded"

    def __init__(self, state_limit: int):
        super().__init__(f"state space exceeds {state_limit} markings")
        self.state_limit = state_limit


class UnknownActivity(DeclarelaxError):
    """An activity label is not part of the matrix alphabet."""

    code = "unknown_activity"


class PreconditionViolated(DeclarelaxError):
    """A relaxation operation was applied to a cell that does not admit it."""

    code = "precondition_violated"

    def __init__(self, message: str, op=None, index: int | None = None):
        super().__init__(message)
        self.op = op
        self.index = index


class EmptyHistory(DeclarelaxError):
    """Undo was requested but no operation has been applied."""

    code = "empty_history"


class EmptyAlphabet(DeclarelaxError):
    """Constraint generation needs at least one activity."""

    code = "empty_alphabet"


class MissingColumn(DeclarelaxError):
    """The event log header lacks a required column."""

    code = "missing_column"


class UnparseableTimestamp(DeclarelaxError):
    """An event row carries a timestamp that cannot be parsed."""

    code = "unparseable_timestamp"

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class EmptyLog(DeclarelaxError):
    """The event log contains no event rows."""

    code = "empty_log"


class UnsupportedTemplate(DeclarelaxError):
    """A constraint template has no SQL rendering."""

    code = "unsupported_template"
