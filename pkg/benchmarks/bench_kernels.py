"""Compare the numba and numpy contraction kernels.

Part 1 times the raw int64 products on sparse structure-constant shaped
operands in one process.  Part 2 runs the same end-to-end workload under
``BIHOM_JIT=1`` and ``BIHOM_JIT=0`` in subprocesses, since the flag is read
at import time.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from bihom import kernels

WORKLOAD = """
import time
from bihom import corpus
from bihom.cohomology import cohomology_dims
from bihom.kernels import backend_name
t0 = time.perf_counter()
A = corpus.load("t4")
M = corpus.load_adjoint("t4", A)
cohomology_dims(A, None, 3)
cohomology_dims(A, M, 3)
print(backend_name(), time.perf_counter() - t0)
"""


def sparse_operand(rng, shape, density=0.1):
    a = rng.integers(-3, 4, size=shape).astype(np.int64)
    a[rng.random(shape) > density] = 0
    return a


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_raw(repeat):
    rng = np.random.default_rng(0)
    print(f"{'shape':>22}  {'numpy ms':>9}  {'numba ms':>9}")
    for n, k, m in ((64, 4, 16), (256, 16, 64), (1024, 16, 256), (4096, 64, 64)):
        a, b = sparse_operand(rng, (n, k)), sparse_operand(rng, (k, m))
        assert np.array_equal(kernels.matmul_numpy(a, b), kernels.matmul_jit(a, b))
        t_np = best_of(lambda: kernels.matmul_numpy(a, b), repeat)
        t_jit = best_of(lambda: kernels.matmul_jit(a, b), repeat)
        print(f"{str((n, k, m)):>22}  {1e3 * t_np:9.3f}  {1e3 * t_jit:9.3f}")


def bench_end_to_end():
    for flag in ("1", "0"):
        env = dict(os.environ, BIHOM_JIT=flag)
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"BIHOM_JIT={flag}: backend={out[0]}  H^1..H^3 of T4 (self + adjoint) in {float(out[1]):.2f} s")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args()
    if not kernels.JIT_ENABLED:
        print("numba unavailable or disabled; both columns use numpy")
    kernels.matmul_jit(np.zeros((1, 1), np.int64), np.zeros((1, 1), np.int64))  # compile
    bench_raw(args.repeat)
    bench_end_to_end()
