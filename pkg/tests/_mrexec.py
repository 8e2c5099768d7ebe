"""Minimal MATCH_RECOGNIZE executor for the generated query dialect.

Parses the PARTITION BY / ORDER BY / PATTERN / DEFINE clauses of a
generated query and reports, per case, whether the row pattern matches at
least once (which is what ONE ROW PER MATCH queries reveal). Each case's
event sequence is translated to a string over private-use codepoints and
the row pattern to an equivalent regular expression.
"""

from __future__ import annotations

import re
from typing import Mapping, Sequence

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z_0-9]*|\(|\)|\||\*|\^|\$")


class QueryParseError(ValueError):
    pass


def _split_top_level(text: str) -> list[str]:
    """Split a DEFINE body on commas outside parentheses and quotes."""
    parts, depth, in_quote, current = [], 0, False, []
    i = 0
    while i < len(text):
        ch = text[i]
        if in_quote:
            current.append(ch)
            if ch == "'":
                if i + 1 < len(text) and text[i + 1] == "'":
                    current.append("'")
                    i += 1
                else:
                    in_quote = False
        elif ch == "'":
            in_quote = True
            current.append(ch)
        elif ch == "(":
            depth += 1
            current.append(ch)
        elif ch == ")":
            depth -= 1
            current.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
        i += 1
    if current:
        parts.append("".join(current).strip())
    return parts


def _parse_literals(text: str) -> list[str]:
    literals = []
    for match in re.finditer(r"'((?:[^']|'')*)'", text):
        literals.append(match.group(1).replace("''", "'"))
    return literals


def _parse_condition(expr: str):
    expr = expr.strip()
    m = re.match(r"^event_name\s+NOT\s+IN\s*\((.*)\)$", expr, re.S)
    if m:
        names = set(_parse_literals(m.group(1)))
        return lambda label: label not in names
    m = re.match(r"^event_name\s+IN\s*\((.*)\)$", expr, re.S)
    if m:
        names = set(_parse_literals(m.group(1)))
        return lambda label: label in names
    m = re.match(r"^event_name\s*=\s*('(?:[^']|'')*')$", expr)
    if m:
        name = _parse_literals(m.group(1))[0]
        return lambda label: label == name
    m = re.match(r"^event_name\s*<>\s*('(?:[^']|'')*')$", expr)
    if m:
        name = _parse_literals(m.group(1))[0]
        return lambda label: label != name
    raise QueryParseError(f"unsupported DEFINE condition: {expr!r}")


def parse_query(sql: str):
    """Extract (pattern tokens, var -> condition) from a generated query."""
    pattern_line = None
    for line in sql.splitlines():
        stripped = line.strip()
        if stripped.startswith("PATTERN ("):
            pattern_line = stripped
            break
    if pattern_line is None or not pattern_line.endswith(")"):
        raise QueryParseError("no PATTERN clause found")
    pattern = pattern_line[len("PATTERN (") : -1]

    define_match = re.search(r"DEFINE\s+(.*?)\n\);", sql, re.S)
    if define_match is None:
        raise QueryParseError("no DEFINE clause found")
    conditions = {}
    for entry in _split_top_level(define_match.group(1)):
        m = re.match(r"^([A-Za-z_][A-Za-z_0-9]*)\s+AS\s+(.*)$", entry, re.S)
        if m is None:
            raise QueryParseError(f"unsupported DEFINE entry: {entry!r}")
        conditions[m.group(1)] = _parse_condition(m.group(2))

    tokens = _TOKEN.findall(pattern)
    return tokens, conditions


def matching_cases(
    sql: str, database: Mapping[str, Sequence[str]]
) -> frozenset[str]:
    """Case ids whose ordered event sequence matches the query pattern."""
    tokens, conditions = parse_query(sql)

    labels = sorted({label for events in database.values() for label in events})
    char_of = {label: chr(0xE000 + i) for i, label in enumerate(labels)}

    def token_to_regex(token: str) -> str:
        if token in ("(", ")", "|", "*", "^", "$"):
            return token
        condition = conditions.get(token)
        if condition is None:  # undefined variable (e.g. ANY): always true
            return "."
        chars = [char_of[label] for label in labels if condition(label)]
        if not chars:
            return "(?:(?!))"  # matches nothing
        return "[" + "".join(chars) + "]"

    regex = re.compile("".join(token_to_regex(t) for t in tokens))

    matched = set()
    for case_id, events in database.items():
        text = "".join(char_of[label] for label in events)
        if regex.search(text):
            matched.add(case_id)
    return frozenset(matched)
