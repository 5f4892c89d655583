"""Benchmark the numba kernels against the pure-numpy fallback.

Imports both backend modules directly (bypassing the CE_TRACE_BACKEND
switch), checks that they agree bit for bit on a synthetic workload, and
reports best-of-N wall times per kernel. The first numba call pays JIT
compilation; a warmup run keeps it out of the timings.

Usage: python3 benchmarks/bench_kernels.py [--ops N] [--repeat K] [--json]
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from cetrace.kernels import numpy_backend
from cetrace.synth import SplitMix64


def make_workload(n_ops: int, seed: int = 7) -> dict[str, np.ndarray]:
    """One long multi-author document as raw columns, timestamps sorted."""
    rng = SplitMix64(seed)
    ts = np.empty(n_ops, dtype=np.int64)
    pos = np.empty(n_ops, dtype=np.int64)
    author = np.empty(n_ops, dtype=np.int64)
    t = 0
    p = 500
    for i in range(n_ops):
        roll = rng.below(100)
        if roll < 70:
            t += rng.below(5_000)
        elif roll < 95:
            t += 5_000 + rng.below(120_000)
        else:
            t += 900_000 + rng.below(600_000)
        if rng.below(100) < 80:
            p = max(0, p + rng.below(31) - 15)
        else:
            p = rng.below(4_000)
        ts[i] = t
        pos[i] = p
        author[i] = rng.below(3)
    return {"ts": ts, "pos": pos, "author": author}


def time_call(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run(n_ops: int, repeat: int) -> dict[str, object]:
    try:
        from cetrace.kernels import numba_backend
    except ImportError:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        raise SystemExit(1)

    work = make_workload(n_ops)
    ts, pos, author = work["ts"], work["pos"], work["author"]
    gap_ms = 30_000
    t_ms, p_chars = 30_000, 10

    starts_np = numpy_backend.session_starts(ts, gap_ms)
    y_np = numpy_backend.switch_points(author)
    x1_np, x2_np = numpy_backend.insertion_spans(author)

    calls = {
        "session_starts": (
            lambda b: b.session_starts(ts, gap_ms),
        ),
        "switch_points": (
            lambda b: b.switch_points(author),
        ),
        "insertion_spans": (
            lambda b: b.insertion_spans(author),
        ),
        "border_outcomes": (
            lambda b: b.border_outcomes(ts, pos, author, y_np, t_ms, p_chars, True),
        ),
        "insertion_outcomes": (
            lambda b: b.insertion_outcomes(ts, pos, author, x1_np, x2_np, t_ms, p_chars),
        ),
        "cluster_labels": (
            lambda b: b.cluster_labels(ts, pos, t_ms, p_chars),
        ),
    }

    results: dict[str, object] = {"ops": n_ops, "repeat": repeat}
    rows: list[dict[str, object]] = []
    for name, (call,) in calls.items():
        ref = call(numpy_backend)
        got = call(numba_backend)  # warmup doubles as the agreement check
        if isinstance(ref, tuple):
            same = all(np.array_equal(a, b) for a, b in zip(ref, got))
        else:
            same = np.array_equal(ref, got)
        if not same:
            print(f"backend mismatch in {name}", file=sys.stderr)
            raise SystemExit(1)
        t_numpy = time_call(lambda: call(numpy_backend), repeat)
        t_numba = time_call(lambda: call(numba_backend), repeat)
        rows.append(
            {
                "kernel": name,
                "numpy_s": round(t_numpy, 6),
                "numba_s": round(t_numba, 6),
                "speedup": round(t_numpy / t_numba, 2) if t_numba > 0 else None,
            }
        )
    results["kernels"] = rows
    results["sessions"] = int(starts_np.shape[0])
    return results


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ops", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true", help="print machine-readable results")
    args = parser.parse_args(argv)
    results = run(args.ops, args.repeat)
    if args.json:
        print(json.dumps(results, indent=2))
        return 0
    print(f"workload: {results['ops']} ops, {results['sessions']} sessions, best of {args.repeat}")
    print(f"{'kernel':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for row in results["kernels"]:
        print(
            f"{row['kernel']:<20} {row['numpy_s']:>9.4f}s {row['numba_s']:>9.4f}s "
            f"{row['speedup']:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
