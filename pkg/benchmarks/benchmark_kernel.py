"""Compare the compiled trade-loop kernel against the pure-Python fallback.

Usage: python benchmarks/benchmark_kernel.py [n_trades] [repeats]
"""

from __future__ import annotations

import sys
import time

import numpy as np

from fxgame import _kernel_py

try:
    from fxgame import _core
except ImportError:
    _core = None


def bench(fn, n_trades: int, repeats: int) -> float:
    best = float("inf")
    for seed in range(repeats):
        t0 = time.perf_counter()
        fn(seed, n_trades, 108_280, 100, 1)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    n_trades = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 5

    py_time = bench(_kernel_py.run_trades, n_trades, repeats)
    print(f"python kernel:  {py_time * 1e3:9.2f} ms  ({n_trades} trades, best of {repeats})")

    if _core is None:
        print("cython kernel:  not built")
        return

    cy_time = bench(_core.run_trades, n_trades, repeats)
    print(f"cython kernel:  {cy_time * 1e3:9.2f} ms  ({n_trades} trades, best of {repeats})")
    print(f"speedup:        {py_time / cy_time:9.1f}x")

    fast = _core.run_trades(0, min(n_trades, 10_000), 108_280, 100, 1)
    slow = _kernel_py.run_trades(0, min(n_trades, 10_000), 108_280, 100, 1)
    for a, b in zip(fast, slow):
        np.testing.assert_array_equal(a, b)
    print("outputs:        bit-identical")


if __name__ == "__main__":
    main()
