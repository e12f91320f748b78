"""Timing comparison: compiled kernels vs the NumPy fallback.

Runs each hot kernel on representative shapes, then one end-to-end shrink
solve per backend. Usage:

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from shrunkclust import _kernels_py as py_impl

try:
    from shrunkclust import _kernels as c_impl
except ImportError:
    c_impl = None


def timeit(fn, repeats=5):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(n, d, edges, c, repeats):
    rng = np.random.default_rng(0)
    g = np.ascontiguousarray(rng.standard_normal((n, c)))
    f = np.ascontiguousarray(rng.standard_normal((n, c)))
    x = np.ascontiguousarray(rng.standard_normal((n, d)))
    s = np.ascontiguousarray(rng.uniform(0.5, 2.0, n))
    rows = rng.integers(0, n, edges).astype(np.int64)
    cols = rng.integers(0, n, edges).astype(np.int64)
    wt = np.ascontiguousarray(rng.uniform(0.1, 1.0, edges))
    centers = np.ascontiguousarray(x[rng.choice(n, 10, replace=False)])
    block = np.ascontiguousarray(rng.random((256, n)))

    out = np.empty_like(g)
    labels = np.empty(n, dtype=np.int64)
    sums = np.empty((10, d))
    counts = np.empty(10, dtype=np.int64)
    min_d2 = np.full(n, np.inf)

    cases = [
        ("row_norms", lambda impl: impl.row_norms(g)),
        ("edge_norms", lambda impl: impl.edge_norms(g, rows, cols)),
        ("shrink_operator",
         lambda impl: impl.shrink_operator(g, f, s, rows, cols, wt, 1.0, out)),
        ("knn_select(256 rows)", lambda impl: impl.knn_select(block, 8, 0)),
        ("lloyd_iter",
         lambda impl: impl.lloyd_iter(x, centers, labels, sums, counts)),
        ("min_sq_dist_update",
         lambda impl: impl.min_sq_dist_update(x, centers[0], min_d2)),
    ]
    print(f"\nkernel timings (n={n}, d={d}, edges={edges}, c={c}; "
          f"best of {repeats})")
    print(f"{'kernel':24s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, call in cases:
        t_py = timeit(lambda: call(py_impl), repeats)
        if c_impl is None:
            print(f"{name:24s} {t_py * 1e3:9.2f}ms {'-':>10s} {'-':>8s}")
            continue
        t_c = timeit(lambda: call(c_impl), repeats)
        print(f"{name:24s} {t_py * 1e3:9.2f}ms {t_c * 1e3:9.2f}ms "
              f"{t_py / t_c:7.1f}x")


def bench_end_to_end(n, repeats):
    import os
    import subprocess
    import sys

    code = (
        "import time, numpy as np\n"
        "from shrunkclust.datasets import make_blobs\n"
        "from shrunkclust.pipelines import run_ssc\n"
        "from shrunkclust.shrink import ShrinkConfig\n"
        f"x, y = make_blobs(n={n}, d=10, c=3, std=0.5, sep=3.0, seed=0)\n"
        "run_ssc(x, 3, k=5, cfg=ShrinkConfig(gamma=1.0), restarts=5, seed=0)\n"
        "start = time.perf_counter()\n"
        "run_ssc(x, 3, k=5, cfg=ShrinkConfig(gamma=1.0), restarts=5, seed=0)\n"
        "print(time.perf_counter() - start)\n"
    )
    print(f"\nend-to-end shrink pipeline (n={n}, restarts=5)")
    for label, flag in (("numpy", "1"), ("compiled", "0")):
        if label == "compiled" and c_impl is None:
            print(f"{label:24s} extension not built")
            continue
        env = dict(os.environ, SHRUNKCLUST_PURE_PYTHON=flag)
        best = np.inf
        for _ in range(repeats):
            out = subprocess.run([sys.executable, "-c", code], env=env,
                                 capture_output=True, text=True, check=True)
            best = min(best, float(out.stdout.strip()))
        print(f"{label:24s} {best:9.3f}s")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true",
                        help="smaller sizes, fewer repeats")
    args = parser.parse_args()
    if c_impl is None:
        print("note: compiled extension unavailable; showing fallback only")
    if args.quick:
        bench_kernels(n=2000, d=16, edges=8000, c=3, repeats=3)
        bench_end_to_end(n=300, repeats=1)
    else:
        bench_kernels(n=9000, d=64, edges=50000, c=10, repeats=5)
        bench_end_to_end(n=1000, repeats=2)


if __name__ == "__main__":
    main()
