"""Vectorized conformance kernels.

Traces are flattened into one integer-code array with per-trace offsets;
each constraint becomes a pair of boolean label masks. The per-template
kernels return the number of violating activation positions per trace.

Two interchangeable engines compute the counts: numba-compiled loops
(default when numba imports) and a pure-numpy path. Set
DECLARELAX_DISABLE_NUMBA=1 to force the numpy path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

ENGINE_ENV_FLAG = "DECLARELAX_DISABLE_NUMBA"

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


_SENTINEL = np.iinfo(np.int64).max


@dataclass(frozen=True)
class EncodedLog:
    codes: np.ndarray  # int32, one entry per event
    offsets: np.ndarray  # int64, len = n_traces + 1
    label_index: Mapping[str, int]

    @property
    def n_traces(self) -> int:
        return len(self.offsets) - 1


def encode_log(traces: Sequence, extra_labels: Iterable[str] = ()) -> EncodedLog:
    """Flatten traces into code/offset arrays over a shared label index."""
    labels: dict[str, int] = {}
    for label in extra_labels:
        labels.setdefault(label, len(labels))
    for trace in traces:
        for label in trace.activities:
            labels.setdefault(label, len(labels))

    total = sum(len(trace.activities) for trace in traces)
    codes = np.empty(total, dtype=np.int32)
    offsets = np.empty(len(traces) + 1, dtype=np.int64)
    offsets[0] = 0
    pos = 0
    for i, trace in enumerate(traces):
        for label in trace.activities:
            codes[pos] = labels[label]
            pos += 1
        offsets[i + 1] = pos
    return EncodedLog(codes, offsets, labels)


def label_mask(labels: Iterable[str], index: Mapping[str, int]) -> np.ndarray:
    mask = np.zeros(max(len(index), 1), dtype=np.bool_)
    for label in labels:
        slot = index.get(label)
        if slot is not None:
            mask[slot] = True
    return mask


# ---------------------------------------------------------------------------
# numba engine


@njit(cache=True)
def _init_counts_nb(codes, offsets, in_target):  # pragma: no cover - jitted
    n_traces = offsets.shape[0] - 1
    out = np.zeros(n_traces, dtype=np.int32)
    for t in range(n_traces):
        if not in_target[codes[offsets[t]]]:
            out[t] = 1
    return out


@njit(cache=True)
def _chain_counts_nb(codes, offsets, in_source, in_target):  # pragma: no cover
    n_traces = offsets.shape[0] - 1
    out = np.zeros(n_traces, dtype=np.int32)
    for t in range(n_traces):
        start, end = offsets[t], offsets[t + 1]
        count = 0
        for i in range(start, end):
            if in_source[codes[i]]:
                if i + 1 >= end or not in_target[codes[i + 1]]:
                    count += 1
        out[t] = count
    return out


@njit(cache=True)
def _alternate_counts_nb(codes, offsets, in_source, in_target):  # pragma: no cover
    n_traces = offsets.shape[0] - 1
    out = np.zeros(n_traces, dtype=np.int32)
    sentinel = np.int64(2**62)
    for t in range(n_traces):
        start, end = offsets[t], offsets[t + 1]
        count = 0
        next_source = sentinel
        next_target = sentinel
        for i in range(end - 1, start - 1, -1):
            code = codes[i]
            if in_source[code]:
                # Satisfied only by a target strictly after i with no
                # intervening source occurrence.
                if next_target == sentinel or next_source < next_target:
                    count += 1
            if in_target[code]:
                next_target = i
            if in_source[code]:
                next_source = i
        out[t] = count
    return out


# ---------------------------------------------------------------------------
# numpy engine


def _init_counts_np(codes, offsets, in_target):
    firsts = codes[offsets[:-1]]
    return (~in_target[firsts]).astype(np.int32)


def _chain_counts_np(codes, offsets, in_source, in_target):
    n = codes.shape[0]
    activation = in_source[codes]
    is_last = np.zeros(n, dtype=np.bool_)
    is_last[offsets[1:] - 1] = True
    next_ok = np.zeros(n, dtype=np.bool_)
    if n > 1:
        next_ok[:-1] = in_target[codes[1:]]
    violated = activation & (is_last | ~next_ok)
    return np.add.reduceat(violated.astype(np.int32), offsets[:-1])


def _alternate_counts_np(codes, offsets, in_source, in_target):
    n = codes.shape[0]
    idx = np.arange(n, dtype=np.int64)
    lengths = np.diff(offsets)
    trace_end = np.repeat(offsets[1:], lengths)

    def next_at_or_after(mask):
        positions = np.where(mask[codes], idx, _SENTINEL)
        return np.minimum.accumulate(positions[::-1])[::-1]

    next_source = np.append(next_at_or_after(in_source)[1:], _SENTINEL)
    next_target = np.append(next_at_or_after(in_target)[1:], _SENTINEL)
    activation = in_source[codes]
    violated = activation & ((next_target >= trace_end) | (next_source < next_target))
    return np.add.reduceat(violated.astype(np.int32), offsets[:-1])


_ENGINES = {
    "numpy": {
        "Init": _init_counts_np,
        "ChainResponse": _chain_counts_np,
        "AlternateResponse": _alternate_counts_np,
    },
}
if HAS_NUMBA:
    _ENGINES["numba"] = {
        "Init": _init_counts_nb,
        "ChainResponse": _chain_counts_nb,
        "AlternateResponse": _alternate_counts_nb,
    }


def available_engines() -> tuple[str, ...]:
    return tuple(sorted(_ENGINES))


def default_engine() -> str:
    if os.environ.get(ENGINE_ENV_FLAG, "").strip().lower() in ("1", "true", "yes"):
        return "numpy"
    return "numba" if "numba" in _ENGINES else "numpy"


def resolve_engine(engine: str | None) -> str:
    if engine is None:
        return default_engine()
    if engine not in _ENGINES:
        raise ValueError(f"unknown engine {engine!r}; available: {available_engines()}")
    return engine


def violation_counts(
    encoded: EncodedLog,
    template_name: str,
    in_source: np.ndarray,
    in_target: np.ndarray,
    engine: str | None = None,
) -> np.ndarray:
    """Violating-activation counts per trace for one constraint."""
    kernels = _ENGINES[resolve_engine(engine)]
    if template_name == "Init":
        return kernels["Init"](encoded.codes, encoded.offsets, in_target)
    if template_name in ("ChainResponse", "AlternateResponse"):
        return kernels[template_name](encoded.codes, encoded.offsets, in_source, in_target)
    raise ValueError(f"no kernel for template {template_name!r}")
