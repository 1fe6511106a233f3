"""Benchmark the compiled Jacobi eigensolver kernel against the numpy fallback.

Run with:  python3 benchmarks/bench_eig.py [--dims 2,4,8,16] [--reps 200]
"""

import argparse
import time

import numpy as np

from qinstr._kernels import BACKEND, jacobi_sweeps
from qinstr._kernels.jacobi_py import jacobi_sweeps as jacobi_sweeps_py


def random_hermitian(dim, rng):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return np.ascontiguousarray(a + a.conj().T)


def bench(kernel, mats, reps):
    start = time.perf_counter()
    for _ in range(reps):
        for a in mats:
            work = a.copy()
            v = np.eye(a.shape[0], dtype=complex)
            kernel(work, v, 100, 1e-13)
    return (time.perf_counter() - start) / (reps * len(mats))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", default="2,4,8,16")
    parser.add_argument("--reps", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"active backend: {BACKEND}")
    print(f"{'dim':>4} {'compiled (us)':>14} {'python (us)':>12} {'speedup':>8}")
    for dim in (int(d) for d in args.dims.split(",")):
        mats = [random_hermitian(dim, rng) for _ in range(10)]
        t_active = bench(jacobi_sweeps, mats, args.reps)
        t_py = bench(jacobi_sweeps_py, mats, args.reps)
        print(f"{dim:>4} {t_active * 1e6:>14.2f} {t_py * 1e6:>12.2f} {t_py / t_active:>7.2f}x")


if __name__ == "__main__":
    main()
