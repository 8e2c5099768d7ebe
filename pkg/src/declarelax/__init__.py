"""Workflow nets -> behavioral relations -> Declare constraints -> SQL queries.

Pipeline: parse a PNML workflow net, verify soundness and free-choice,
derive the behavioral relation matrix, optionally relax it with user
operations, generate branched-Declare constraints, and either check event
logs directly or emit MATCH_RECOGNIZE SQL for a relational engine.
"""

from .checker import ConformanceReport, check_log, evaluate_constraint
from .constraints import (
    Constraint,
    Template,
    constraints_for_matrix,
    extract_relations,
    generate_constraints,
    get_start_activities,
    is_optional_activity,
)
from .errors import DeclarelaxError
from .eventlog import Event, Trace, parse_event_log
from .relations import (
    RelationKind,
    RelationMatrix,
    build_matrix,
    derive_directly_follows,
    derive_matrix,
    transitive_closure,
)
from .relaxation import (
    Decouple,
    DirectToEventual,
    ExclusiveToDirect,
    RemoveActivity,
    apply_op,
    replay,
    undo,
)
from .sqlgen import QueryBundle, emit_query, emit_schema, render_bundle
from .wfnet import (
    SoundnessVerdict,
    Transition,
    WorkflowNet,
    build_net,
    check_free_choice,
    check_soundness,
    parse_pnml,
    serialize_pnml,
)

__version__ = "0.1.0"

__all__ = [
    "ConformanceReport",
    "Constraint",
    "Decouple",
    "DeclarelaxError",
    "DirectToEventual",
    "Event",
    "ExclusiveToDirect",
    "QueryBundle",
    "RelationKind",
    "RelationMatrix",
    "RemoveActivity",
    "SoundnessVerdict",
    "Template",
    "Trace",
    "Transition",
    "WorkflowNet",
    "apply_op",
    "build_matrix",
    "build_net",
    "check_free_choice",
    "check_log",
    "check_soundness",
    "constraints_for_matrix",
    "derive_directly_follows",
    "derive_matrix",
    "emit_query",
    "emit_schema",
    "evaluate_constraint",
    "extract_relations",
    "generate_constraints",
    "get_start_activities",
    "is_optional_activity",
    "parse_event_log",
    "parse_pnml",
    "render_bundle",
    "replay",
    "serialize_pnml",
    "transitive_closure",
    "undo",
]
