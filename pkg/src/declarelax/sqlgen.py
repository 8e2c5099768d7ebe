"""SQL MATCH_RECOGNIZE query generation for Declare constraints.

Two modes. Paper mode emits one satisfaction-detection query per
constraint (the PATTERN finds one satisfying occurrence). Violation mode
emits queries returning exactly the case_ids on which the constraint is
violated under the checker's semantics; those are the queries to use for
conformance counting.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .constraints import Constraint, Template, ordered
from .errors import UnsupportedTemplate

MODES = ("paper", "violation")

_QUERY_TEMPLATE = """SELECT case_id FROM {table} MATCH_RECOGNIZE (
    PARTITION BY case_id
    ORDER BY end_time
    ONE ROW PER MATCH
    PATTERN ({pattern})
    DEFINE {define}
);"""


def emit_schema(table: str = "events") -> str:
    """CREATE TABLE statement for the single events table."""
    return (
        f"CREATE TABLE {table} (\n"
        "    case_id VARCHAR NOT NULL,\n"
        "    end_time TIMESTAMP NOT NULL,\n"
        "    event_name VARCHAR NOT NULL\n"
        ");"
    )


def variable_names(labels: Iterable[str]) -> dict[str, str]:
    """Injective label -> pattern-variable mapping.

    Upper-cases, replaces non-alphanumerics with underscores, prefixes
    names that would not be valid identifiers, and resolves collisions
    (including with the ANY keyword) by numeric suffixes.
    """
    used = {"ANY"}
    names: dict[str, str] = {}
    for label in sorted(labels):
        base = re.sub(r"[^A-Za-z0-9]", "_", label).upper()
        if not base or base[0].isdigit():
            base = "A_" + base
        name = base
        suffix = 2
        while name in used:
            name = f"{base}_{suffix}"
            suffix += 1
        used.add(name)
        names[label] = name
    return names


def emit_query(
    constraint: Constraint,
    mode: str,
    table: str = "events",
    names: Mapping[str, str] | None = None,
) -> str:
    """Render one constraint as a MATCH_RECOGNIZE query."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if constraint.template not in (
        Template.INIT,
        Template.CHAIN_RESPONSE,
        Template.ALTERNATE_RESPONSE,
    ):  # pragma: no cover - template enum is closed
        raise UnsupportedTemplate(f"no SQL rendering for {constraint.template!r}")
    if names is None:
        names = variable_names(constraint.source | constraint.target)

    if mode == "paper":
        pattern, define = _paper_fragments(constraint, names)
    else:
        pattern, define = _violation_fragments(constraint)
    return _QUERY_TEMPLATE.format(table=table, pattern=pattern, define=define)


def _paper_fragments(c: Constraint, names: Mapping[str, str]) -> tuple[str, str]:
    defined: list[str] = []

    def var(label: str) -> str:
        name = names[label]
        defined.append(f"{name} AS event_name = {_literal(label)}")
        return name

    def group(labels: frozenset[str]) -> str:
        parts = [var(label) for label in sorted(labels)]
        return parts[0] if len(parts) == 1 else "(" + " | ".join(parts) + ")"

    if c.template is Template.INIT:
        pattern = f"^{group(c.target)} ANY*"
    elif c.template is Template.CHAIN_RESPONSE:
        pattern = f"ANY* {group(c.source)} {group(c.target)} ANY*"
    else:
        source = group(c.source)
        gap = _fresh_name("GAP", names)
        defined_gap = f"{gap} AS event_name NOT IN ({_literal_list(c.source)})"
        target = group(c.target)
        defined.insert(len(c.source), defined_gap)
        pattern = f"ANY* {source} {gap}* {target} ANY*"
    # A label in both sets is defined once.
    unique = list(dict.fromkeys(defined))
    return pattern, ", ".join(unique)


def _violation_fragments(c: Constraint) -> tuple[str, str]:
    if c.template is Template.INIT:
        pattern = "^WRONG_START"
        define = f"WRONG_START AS event_name NOT IN ({_literal_list(c.target)})"
    elif c.template is Template.CHAIN_RESPONSE:
        pattern = "SRC (BREAK | $)"
        define = (
            f"SRC AS event_name IN ({_literal_list(c.source)}), "
            f"BREAK AS event_name NOT IN ({_literal_list(c.target)})"
        )
    else:
        recurring = c.source - c.target
        defines = [
            f"SRC AS event_name IN ({_literal_list(c.source)})",
            f"GAP AS event_name NOT IN ({_literal_list(c.source | c.target)})",
        ]
        if recurring:
            pattern = "SRC GAP* (RECUR | $)"
            defines.append(f"RECUR AS event_name IN ({_literal_list(recurring)})")
        else:
            # Every source label is also a target label, so a recurrence
            # would satisfy the constraint; only "no target ever" violates.
            pattern = "SRC GAP* $"
        define = ", ".join(defines)
    return pattern, define


@dataclass(frozen=True)
class QueryEntry:
    constraint: Constraint
    mode: str
    sql: str


@dataclass(frozen=True)
class QueryBundle:
    schema_sql: str
    entries: tuple[QueryEntry, ...]

    def to_sql(self) -> str:
        parts = ["-- events table", self.schema_sql, ""]
        for entry in self.entries:
            parts.append(f"-- {entry.constraint.describe()} [{entry.mode}]")
            parts.append(entry.sql)
            parts.append("")
        return "\n".join(parts)


def render_bundle(
    constraints: Iterable[Constraint], mode: str, table: str = "events"
) -> QueryBundle:
    """One query per constraint plus the schema statement, stably ordered."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    constraint_list = ordered(constraints)
    alphabet: set[str] = set()
    for c in constraint_list:
        alphabet.update(c.source)
        alphabet.update(c.target)
    names = variable_names(alphabet)
    entries = tuple(
        QueryEntry(c, mode, emit_query(c, mode, table=table, names=names))
        for c in constraint_list
    )
    return QueryBundle(emit_schema(table), entries)


def _literal(label: str) -> str:
    return "'" + label.replace("'", "''") + "'"


def _literal_list(labels: frozenset[str]) -> str:
    return ", ".join(_literal(label) for label in sorted(labels))


def _fresh_name(base: str, names: Mapping[str, str]) -> str:
    taken = set(names.values()) | {"ANY"}
    name = base
    suffix = 2
    while name in taken:
        name = f"{base}_{suffix}"
        suffix += 1
    return name
