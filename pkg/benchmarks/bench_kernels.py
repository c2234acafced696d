"""Compare the compiled and numpy kernel backends.

Run from the repository root after ``pip install -e .``::

    python benchmarks/bench_kernels.py [--trials N]

Kernel timings import both backends directly. The end-to-end sweep is run in
subprocesses so that ``JRSP_PURE_PYTHON`` selects the backend at import.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from jrsp.kernels import _pykernels

try:
    from jrsp.kernels import _ckernels
except ImportError:
    _ckernels = None

SWEEP = """
import time
from jrsp import kernels, verify
params = verify.sweep_params({trials}, 7)
t = time.perf_counter()
summary = verify.sweep(params)
print(kernels.BACKEND, time.perf_counter() - t, summary.passed)
"""


def kernel_cases(n, rng):
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    amps /= np.linalg.norm(amps)
    gate = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    bra = np.full(4, 0.5, dtype=np.complex128)
    perm = list(range(n))[::-1]
    return {
        "apply_1q": lambda impl: impl.apply_1q(amps, n, n // 2, gate),
        "apply_cnot": lambda impl: impl.apply_cnot(amps, n, 0, n - 1),
        "project_pair": lambda impl: impl.project_pair(amps, n, 0, n // 2, bra),
        "permute": lambda impl: impl.permute(amps, n, perm),
    }


def bench_kernels(sizes, number):
    rng = np.random.default_rng(0)
    impls = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'kernel':<14}{'qubits':>7}" + "".join(f"{name + ' (us)':>16}" for name, _ in impls))
    for n in sizes:
        for name, fn in kernel_cases(n, rng).items():
            cells = []
            for _, impl in impls:
                t = timeit.timeit(lambda: fn(impl), number=number) / number
                cells.append(f"{t * 1e6:>16.2f}")
            print(f"{name:<14}{n:>7}" + "".join(cells))


def bench_sweep(trials):
    for pure in ("1", ""):
        env = {**os.environ, "JRSP_PURE_PYTHON": pure}
        out = subprocess.run(
            [sys.executable, "-c", SWEEP.format(trials=trials)],
            capture_output=True, text=True, env=env, check=True,
        ).stdout.split()
        print(f"sweep of {trials + 5} parameter sets, {out[0]:>6} backend: {float(out[1]):.2f}s "
              f"(passed={out[2]})")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--number", type=int, default=2000)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the numpy backend is timed")
    bench_kernels([4, 6, 8, 12], args.number)
    print()
    bench_sweep(args.trials)


if __name__ == "__main__":
    main()
