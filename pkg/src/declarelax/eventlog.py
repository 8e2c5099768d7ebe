"""Event-log ingestion: CSV rows grouped into time-ordered traces."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import EmptyLog, MalformedDocument, MissingColumn, UnparseableTimestamp

REQUIRED_COLUMNS = ("case_id", "event_name", "end_time")


@dataclass(frozen=True)
class Event:
    case_id: str
    activity: str
    timestamp: datetime


@dataclass(frozen=True)
class Trace:
    """One case: activity labels ordered by timestamp (input order on ties)."""

    case_id: str
    activities: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.activities)


def parse_timestamp(raw: str, row: int | None = None) -> datetime:
    """Accept 'YYYY-MM-DD HH:MM:SS' and ISO-8601 forms; normalize to naive UTC."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError:
        raise UnparseableTimestamp(f"cannot parse timestamp {raw!r}", row=row) from None
    if parsed.tzinfo is not None:
        parsed = parsed.astimezone(timezone.utc).replace(tzinfo=None)
    return parsed


def parse_event_log(document: str) -> list[Trace]:
    """Group rows by case and order each case by end_time.

    Expects comma-separated text whose header names the case_id,
    event_name, and end_time columns (any column order). Ties on
    end_time keep the original row order.
    """
    reader = csv.DictReader(io.StringIO(document))
    header = reader.fieldnames or []
    for column in REQUIRED_COLUMNS:
        if column not in header:
            raise MissingColumn(f"event log header lacks column {column!r}")

    by_case: dict[str, list[tuple[datetime, int, str]]] = {}
    row_number = 1
    for record in reader:
        row_number += 1
        case_id = (record.get("case_id") or "").strip()
        activity = (record.get("event_name") or "").strip()
        raw_time = (record.get("end_time") or "").strip()
        if not case_id or not activity:
            raise MalformedDocument(f"row {row_number} has an empty case_id or event_name")
        if not raw_time:
            raise UnparseableTimestamp(f"row {row_number} has an empty end_time", row=row_number)
        timestamp = parse_timestamp(raw_time, row=row_number)
        by_case.setdefault(case_id, []).append((timestamp, row_number, activity))

    if not by_case:
        raise EmptyLog("event log has no rows")

    traces = []
    for case_id, events in by_case.items():
        events.sort(key=lambda item: (item[0], item[1]))
        traces.append(Trace(case_id, tuple(activity for _, _, activity in events)))
    return traces
