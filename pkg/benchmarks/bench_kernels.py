"""Compiled vs numpy kernel timings on the workloads the verifiers actually run.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""
import argparse
import json
import time

import numpy as np

from ffincidence import Form, VarietySpec, kernels, mk_field
from ffincidence.geometry import sqsign_table, variety_array


def workloads():
    ctx = mk_field(11)
    t = ctx.tables
    rng = np.random.default_rng(0)
    E = variety_array(VarietySpec(Form.CONE, 4), ctx)
    M = ctx.vector_array(4)[:4096]
    X = rng.integers(0, 11, size=(3000, 4)).astype(np.int32)
    Y = rng.integers(0, 11, size=(3000, 4)).astype(np.int32)
    target = rng.integers(0, 11, size=3000).astype(np.int32)
    cone = sqsign_table(Form.CONE, 4, ctx)
    W = np.unique(rng.integers(0, 11, size=(5000, 4)).astype(np.int32), axis=0)
    mask = np.zeros(11**4, dtype=np.uint8)
    mask[ctx.vector_index(W)] = 1
    return {
        "trace_hist (4096 freqs x cone q=11 k=4)": lambda: kernels.trace_hist(t["trmul"], M, E, 11),
        "pair_form_hist (3000 x 3000, k=4)": lambda: kernels.pair_form_hist(X, Y, t["sub"], cone, t["add"]),
        "pair_form_match (3000 x 3000, k=4)": lambda: kernels.pair_form_match(X, Y, target, t["sub"], cone, t["add"]),
        "shift_member_count (|W|~5000, cone q=11 k=4)": lambda: kernels.shift_member_count(W, E, t["sub"], mask, 11),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args()

    prev = kernels.BACKEND
    rows = []
    try:
        for name, fn in workloads().items():
            row = {"workload": name}
            for backend in sorted(kernels.BACKENDS):
                kernels.use(backend)
                row[backend] = best_of(fn, args.repeat)
            rows.append(row)
    finally:
        kernels.use(prev)

    backends = sorted(kernels.BACKENDS)
    print(f"{'workload':48s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for r in rows:
        line = f"{r['workload']:48s}" + "".join(f"{r[b] * 1000:10.1f}ms" for b in backends)
        if "compiled" in r and "numpy" in r:
            line += f"{r['numpy'] / r['compiled']:11.1f}x"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
