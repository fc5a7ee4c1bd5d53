"""Compiled kernels against the pure-Python fallback.

Each backend runs in its own interpreter (the choice is made at import
time via COARSECYL_PURE).  Usage:

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from coarsecyl import kernels
from coarsecyl.fixtures import comb, path_graph, model

def best(fn, repeat):
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t)
    return min(ts)

repeat = int(sys.argv[1])
out = {"backend": kernels.BACKEND}
g = model("coned:F2:4").graph
out["apsp coned F2 R=4 (%d v)" % len(g)] = best(
    lambda: kernels.apsp(g.indptr, g.indices), repeat)
c = comb(2000)
out["bfs comb (%d v) x200" % len(c)] = best(
    lambda: [kernels.bfs(c.indptr, c.indices, [s]) for s in range(200)], repeat)
p = path_graph(10 ** 4)
mask = np.ones(len(p), dtype=np.uint8)
key = np.arange(len(p), dtype=np.int32)
out["near_counts path 10^4, radius 200"] = best(
    lambda: kernels.near_counts(p.indptr, p.indices, mask, key, 200), repeat)
print(json.dumps(out))
"""


def run(pure, repeat):
    env = dict(os.environ, COARSECYL_PURE="1" if pure else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled extension not importable; both columns are pure Python")
    print(f"{'kernel':45s} {'compiled':>10s} {'pure':>10s} {'speedup':>8s}")
    for k in fast:
        if k == "backend":
            continue
        print(f"{k:45s} {fast[k]:10.4f} {slow[k]:10.4f} {slow[k] / fast[k]:8.1f}")


if __name__ == "__main__":
    main()
