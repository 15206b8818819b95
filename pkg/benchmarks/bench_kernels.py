"""Benchmark the columnar kernels: numba @njit vs pure-numpy fallback vs
the boxed row-wise reference.

    python3 benchmarks/bench_kernels.py --events 200000 --repeat 5 --json

The numba and numpy paths are forced explicitly here (independent of the
RAGBUF_NO_NUMBA flag) so one process can time both.
"""

import argparse
import json
import time

import numpy as np

from ragbuf.kernels import (
    _HAS_NUMBA,
    _event_columns,
    _mass_columnar_numpy,
    _sum_flat_jit,
    gen_events,
    invariant_mass_rowwise,
    path_length,
)
from ragbuf.layout import ListOffsetArray, PrimitiveArray

if _HAS_NUMBA:
    from ragbuf.kernels import _mass_loop_jit


def timeit(func, repeat: int) -> float:
    func()  # warm-up (JIT compile, cache touch)
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - start)
    return best


def bench_mass(events, repeat: int) -> dict[str, float]:
    columns = _event_columns(events)
    out = np.empty(events.length, dtype=np.float64)
    results: dict[str, float] = {}
    if _HAS_NUMBA:
        results["mass_numba"] = timeit(lambda: _mass_loop_jit(*columns, out), repeat)
    results["mass_numpy"] = timeit(lambda: _mass_columnar_numpy(*columns), repeat)
    results["mass_rowwise"] = timeit(lambda: invariant_mass_rowwise(events), repeat)
    return results


def bench_sum(n_lists: int, repeat: int, seed: int) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    counts = rng.integers(0, 8, size=n_lists)
    offsets = np.zeros(n_lists + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    data = rng.uniform(0.0, 1.0, size=int(offsets[-1]))
    node = ListOffsetArray(offsets, PrimitiveArray(data))
    start, stop = int(offsets[0]), int(offsets[-1])
    results: dict[str, float] = {}
    if _HAS_NUMBA:
        results["sum_numba"] = timeit(lambda: _sum_flat_jit(node.content.data, start, stop), repeat)
    results["sum_numpy"] = timeit(lambda: node.content.data[start:stop].sum(), repeat)

    def rowwise_sum():
        total = 0.0
        for i in range(node.length):
            lo, hi = int(node.offsets[i]), int(node.offsets[i + 1])
            for j in range(lo, hi):
                total += node.content.data[j]
        return total

    results["sum_rowwise"] = timeit(rowwise_sum, repeat)
    # cross-check the backends agree before reporting timings
    if _HAS_NUMBA:
        assert abs(_sum_flat_jit(node.content.data, start, stop) - path_length(node)) < 1e-6
    return results


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--events", type=int, default=100_000)
    parser.add_argument("--lists", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    events = gen_events(args.events, args.seed)
    results = {"n_events": args.events, "n_lists": args.lists, "numba_available": _HAS_NUMBA}
    results.update(bench_mass(events, args.repeat))
    results.update(bench_sum(args.lists, args.repeat, args.seed))

    if args.json:
        print(json.dumps(results))
        return
    width = max(len(k) for k in results)
    for key, value in results.items():
        if isinstance(value, float):
            print(f"{key:<{width}}  {value * 1e3:10.3f} ms")
        else:
            print(f"{key:<{width}}  {value}")
    if _HAS_NUMBA:
        print(f"{'mass numpy/numba':<{width}}  {results['mass_numpy'] / results['mass_numba']:10.2f}x")
        print(f"{'mass rowwise/numba':<{width}}  {results['mass_rowwise'] / results['mass_numba']:10.2f}x")


if __name__ == "__main__":
    main()
