#!/usr/bin/env python3
"""Compare the numba and numpy batch least-squares backends.

The backend is chosen at import time from PARETOREG_BACKEND, so each
backend runs in its own subprocess with the flag set.  The parent
collects per-workload timings plus a result digest and prints a small
table; digests from the two backends must agree to 1e-10.

Usage:
    python3 benchmarks/bench_kernels.py [--repeats 5] [--large]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = [
    # label, n rows, k predictors, m masks per call
    ("generation-15", 500, 15, 30),
    ("generation-30", 200, 30, 60),
    ("additive-25", 1000, 25, 26),
    ("enumeration-12", 500, 12, 500),
]
LARGE = ("community-122", 1994, 122, 122)


def run_worker(backend):
    import numpy as np

    from paretoreg._kernels import active_backend, ols_batch

    repeats = int(os.environ["BENCH_REPEATS"])
    results = []
    for label, n, k, m in json.loads(os.environ["BENCH_WORKLOADS"]):
        rng = np.random.default_rng(42)
        X = rng.standard_normal((n, k))
        y = rng.standard_normal(n)
        masks = rng.random((m, k)) < 0.4
        masks[0] = False  # keep the empty model in the mix

        t0 = time.perf_counter()
        _, _, mses, _ = ols_batch(X, y, masks)
        first = time.perf_counter() - t0

        best = first
        for _ in range(repeats):
            t0 = time.perf_counter()
            _, _, mses, _ = ols_batch(X, y, masks)
            best = min(best, time.perf_counter() - t0)
        results.append(
            {
                "label": label,
                "first": first,
                "best": best,
                "digest": float(mses.sum()),
            }
        )
    json.dump({"backend": active_backend(), "results": results}, sys.stdout)


def run_backend(backend, workloads, repeats):
    env = dict(os.environ)
    env["PARETOREG_BACKEND"] = backend
    env["BENCH_WORKLOADS"] = json.dumps(workloads)
    env["BENCH_REPEATS"] = str(repeats)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker", backend],
        env=env,
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"{backend} worker failed")
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument(
        "--large",
        action="store_true",
        help="include a community-sized workload (slower)",
    )
    ap.add_argument("--worker", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        run_worker(args.worker)
        return

    workloads = list(WORKLOADS) + ([LARGE] if args.large else [])
    reports = {b: run_backend(b, workloads, args.repeats) for b in ("numpy", "numba")}
    if reports["numba"]["backend"] != "numba":
        print("note: numba not importable, both columns are the numpy path")

    print(f"{'workload':<16} {'n':>5} {'k':>4} {'m':>4} "
          f"{'numpy best':>11} {'numba best':>11} {'numba first':>12} {'speedup':>8}")
    for (label, n, k, m), np_row, nb_row in zip(
        workloads, reports["numpy"]["results"], reports["numba"]["results"]
    ):
        rel = abs(np_row["digest"] - nb_row["digest"])
        scale = max(abs(np_row["digest"]), 1.0)
        if rel > 1e-10 * scale:
            raise SystemExit(
                f"backend digests disagree on {label}: "
                f"{np_row['digest']!r} vs {nb_row['digest']!r}"
            )
        speedup = np_row["best"] / nb_row["best"]
        print(f"{label:<16} {n:>5} {k:>4} {m:>4} "
              f"{np_row['best'] * 1e3:>9.2f}ms {nb_row['best'] * 1e3:>9.2f}ms "
              f"{nb_row['first'] * 1e3:>10.2f}ms {speedup:>7.2f}x")
    print("digests agree to 1e-10 on all workloads")


if __name__ == "__main__":
    main()
