#!/usr/bin/env python3
"""Benchmark the conformance kernels: numba engine vs pure-numpy fallback.

Generates a synthetic log, checks it against a fixed constraint mix with
both engines, and prints per-engine timings. The numba engine is warmed
before timing so JIT compilation is excluded.

Usage: python benchmarks/bench_checker.py [--cases 10000] [--events 10] [--repeat 3]
"""

import argparse
import random
import statistics
import time

from declarelax import check_log
from declarelax._kernels import available_engines, encode_log, label_mask, violation_counts
from declarelax.constraints import alternate_response, chain_response, init
from declarelax.eventlog import Trace


def synthetic_log(cases: int, events_per_case: int, seed: int = 7):
    rng = random.Random(seed)
    alphabet = [f"step{i}" for i in range(8)]
    return [
        Trace(f"case_{i}", tuple(rng.choice(alphabet) for _ in range(events_per_case)))
        for i in range(cases)
    ]


def constraint_mix():
    return [
        init(["step0", "step1"]),
        chain_response(["step0"], ["step1", "step2"]),
        chain_response(["step2"], ["step3"]),
        chain_response(["step4"], ["step5", "step6"]),
        chain_response(["step6"], ["step7"]),
        alternate_response(["step1"], ["step3"]),
        alternate_response(["step3"], ["step5"]),
        alternate_response(["step5"], ["step7"]),
        alternate_response(["step0"], ["step7"]),
        alternate_response(["step2", "step4"], ["step6"]),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cases", type=int, default=10_000)
    parser.add_argument("--events", type=int, default=10)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    traces = synthetic_log(args.cases, args.events)
    constraints = constraint_mix()
    total_events = sum(len(t) for t in traces)
    print(f"log: {args.cases} cases, {total_events} events, {len(constraints)} constraints")

    encoded = encode_log(traces, [f"step{i}" for i in range(8)])
    masks = [
        (
            c.template.value,
            label_mask(c.source, encoded.label_index),
            label_mask(c.target, encoded.label_index),
        )
        for c in constraints
    ]
    print("kernel passes only (all constraints over the full log):")
    for engine in available_engines():
        for template, src, tgt in masks:  # warm-up / JIT
            violation_counts(encoded, template, src, tgt, engine=engine)
        timings = []
        for _ in range(args.repeat):
            started = time.perf_counter()
            for template, src, tgt in masks:
                violation_counts(encoded, template, src, tgt, engine=engine)
            timings.append(time.perf_counter() - started)
        best = min(timings)
        print(f"  {engine:>6}: best {best * 1000:7.1f} ms")

    print("end to end (check_log including report assembly):")
    rates = set()
    for engine in available_engines():
        check_log(traces[:50], constraints, engine=engine)  # warm-up / JIT
        timings = []
        for _ in range(args.repeat):
            started = time.perf_counter()
            report = check_log(traces, constraints, engine=engine)
            timings.append(time.perf_counter() - started)
        rates.add(round(report.conformance_rate, 6))
        best, median = min(timings), statistics.median(timings)
        throughput = total_events / best / 1e6
        print(
            f"  {engine:>6}: best {best * 1000:7.1f} ms | median {median * 1000:7.1f} ms"
            f" | {throughput:5.1f} M events/s"
        )

    if len(rates) != 1:
        raise SystemExit(f"engines disagree on the conformance rate: {rates}")
    print(f"engines agree, conformance rate {rates.pop():.3f}")


if __name__ == "__main__":
    main()
