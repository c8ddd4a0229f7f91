#!/usr/bin/env python3
"""Compare the jit kernels against the pure-numpy fallback.

Runs each hot kernel under both backends (re-executing itself in a
subprocess with SHAPEGEO_BACKEND set) and prints a timing table.

    python3 benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys
import time

import numpy as np

TWO_PI = 2 * np.pi


def run_kernels(reps):
    from shapegeo.backend import using_numba
    from shapegeo.curvature import immersion_double_terms
    from shapegeo.matching import (
        FAST_MOVES,
        SegmentedCurve,
        _dp_core,
        _mismatch_tables,
        _move_tables,
    )

    rng = np.random.default_rng(0)
    results = {"backend": "numba" if using_numba() else "numpy"}

    # dynamic-programming alignment, one sweep at matching's default size
    n = 128
    a0 = rng.uniform(-np.pi, np.pi, n)
    a1 = rng.uniform(-np.pi, np.pi, n)
    s0 = SegmentedCurve(a0, "closed", 1, -1)
    s1 = SegmentedCurve(a1, "closed", 1, -1)
    cc, _ = _mismatch_tables(s0, s1)
    mt = _move_tables(FAST_MOVES, TWO_PI / n, TWO_PI / n)
    fmat = np.maximum(cc, 0.0)
    v = np.empty((n + 1, n + 1))
    bp = np.zeros((1, 1), dtype=np.int64)
    _dp_core(fmat, *mt, v, bp, False)  # warm-up / jit compile
    start = time.perf_counter()
    for _ in range(reps):
        val = _dp_core(fmat, *mt, v, bp, False)
    results["dp_sweep_ms"] = (time.perf_counter() - start) / reps * 1e3
    results["dp_value"] = float(val)

    # curvature double quadrature at the curvature module's default cap
    m = 512
    w = np.full(m, TWO_PI / m)
    alpha = rng.uniform(-np.pi, np.pi, m)
    d1 = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    d2 = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    immersion_double_terms(d1, d2, alpha, w)  # warm-up
    start = time.perf_counter()
    loops = max(1, reps // 4)
    for _ in range(loops):
        t1, t2, cx = immersion_double_terms(d1, d2, alpha, w)
    results["double_quadrature_ms"] = (time.perf_counter() - start) / loops * 1e3
    results["quadrature_value"] = float(t1 + t2 - cx)
    return results


def main():
    if os.environ.get("_BENCH_CHILD"):
        print(json.dumps(run_kernels(int(sys.argv[1]))))
        return
    rows = []
    for backend, reps in (("numba", 50), ("numpy", 2)):
        env = dict(os.environ, SHAPEGEO_BACKEND=backend, _BENCH_CHILD="1")
        out = subprocess.run(
            [sys.executable, __file__, str(reps)], env=env, capture_output=True, text=True, check=True
        )
        rows.append(json.loads(out.stdout.strip().splitlines()[-1]))
    print(f"{'kernel':<28}{'numba':>12}{'numpy':>14}{'speedup':>10}")
    for key, label in (
        ("dp_sweep_ms", "dp alignment sweep (n=128)"),
        ("double_quadrature_ms", "double quadrature (N=512)"),
    ):
        a, b = rows[0][key], rows[1][key]
        print(f"{label:<28}{a:>10.2f}ms{b:>12.2f}ms{b / a:>9.1f}x")
    for key in ("dp_value", "quadrature_value"):
        assert abs(rows[0][key] - rows[1][key]) < 1e-9 * max(1.0, abs(rows[0][key])), key
    print("backend values agree")


if __name__ == "__main__":
    main()
