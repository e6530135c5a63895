#!/usr/bin/env python3
"""Side-by-side benchmark of the hot kernels: numba JIT vs pure-Python
fallback (FLAGFORGE_PURE_PYTHON=1).

Run with no arguments to get the comparison table; the script re-invokes
itself once per backend so each process imports the kernels exactly once.
JIT compilation happens in a warmup call and is excluded from timings.
"""

import json
import os
import subprocess
import sys
import time


def workload():
    import numpy as np

    from flagforge import _kernels, constructions, flags, graphs

    rng = np.random.default_rng(12345)
    _kernels.warmup()

    results = {}

    # canonical labeling of random 8-vertex graphs
    gs = []
    for _ in range(300):
        rows = [0] * 8
        for u in range(8):
            for v in range(u + 1, 8):
                if rng.integers(2):
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
        gs.append(np.array(rows, dtype=np.int64))
    nofix = np.empty(0, dtype=np.int64)
    t0 = time.perf_counter()
    acc = 0
    for a in gs:
        code, _ = _kernels.canonical_search(a, 8, nofix)
        acc ^= int(code)
    results["canonical_8v_x300"] = (time.perf_counter() - t0, acc)

    # independence numbers of materialized pentagon blow-ups
    spec = constructions.BlowupSpec(graphs.cycle_graph(5), (8, 8, 8, 8, 8))
    n, masks = constructions.materialize(spec)
    arr = np.array(masks, dtype=np.uint64)
    t0 = time.perf_counter()
    val = 0
    for _ in range(50):
        val = _kernels.independence_number_large(arr, n)
    results["alpha_40v_x50"] = (time.perf_counter() - t0, int(val))

    # part-size scan
    combs = np.array([v * (v - 1) * (v - 2) * (v - 3) // 24
                      for v in range(101)], dtype=np.int64)
    t0 = time.perf_counter()
    best, tuples = _kernels.intopt_scan(100, 30, 50, combs)
    results["intopt_n100"] = (time.perf_counter() - t0,
                              int(best) ^ len(tuples))

    # clique counting over the admissible 6-vertex catalog
    cat = flags.enumerate_admissible(6, 3)
    arrs = [g.adj_array() for g in cat]
    t0 = time.perf_counter()
    tot = 0
    for a in arrs:
        for _ in range(20):
            tot += _kernels.count_cliques_small(a, 6, 4)
    results["cliques_6v"] = (time.perf_counter() - t0, tot)

    return results


def main():
    if len(sys.argv) > 1 and sys.argv[1] == "--worker":
        print(json.dumps({k: [t, chk] for k, (t, chk) in workload().items()}))
        return

    runs = {}
    for label, env_val in (("numba", "0"), ("python", "1")):
        env = dict(os.environ, FLAGFORGE_PURE_PYTHON=env_val)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker"],
            env=env, capture_output=True, text=True, check=True)
        runs[label] = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{'kernel':<20} {'numba (s)':>10} {'python (s)':>11} {'speedup':>8}")
    print("-" * 55)
    for key in runs["numba"]:
        tn, cn = runs["numba"][key]
        tp, cp = runs["python"][key]
        assert cn == cp, f"backend mismatch on {key}: {cn} vs {cp}"
        print(f"{key:<20} {tn:>10.4f} {tp:>11.4f} {tp / tn:>7.1f}x")
    print("checksums agree across backends")


if __name__ == "__main__":
    main()
