"""Timing comparison of the compiled and pure-Python power iteration kernels.

Run from the repository root:

    python3 benchmarks/bench_kernels.py --sizes 10 30 100 --repeats 20

Both kernels are loaded directly (bypassing the import-time selection) so a
single run measures the two side by side on identical inputs.
"""

import argparse
import random
import statistics
import time

from entropygames.kernels import _power_py

try:
    from entropygames.kernels import _power as compiled
except ImportError:
    compiled = None


def random_flat(n: int, rng: random.Random, density: float = 0.6):
    flat = [0.0] * (n * n)
    for i in range(n * n):
        if rng.random() < density:
            flat[i] = rng.uniform(0.0, 4.0)
    # avoid all-zero rows so the radius is positive and iterations are honest
    for i in range(n):
        if all(flat[i * n + j] == 0.0 for j in range(n)):
            flat[i * n + rng.randrange(n)] = rng.uniform(0.5, 4.0)
    return flat


def time_kernel(kernel, mats, n: int, tol: float, max_iter: int):
    times = []
    checks = []
    for flat in mats:
        start = time.perf_counter()
        lo, hi, iters, _ = kernel.power_enclosure(flat, n, tol, max_iter)
        times.append(time.perf_counter() - start)
        checks.append((lo + hi) / 2)
    return times, checks


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 30, 100])
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--max-iter", type=int, default=10000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    if compiled is None:
        print("compiled kernel not built; timing the pure fallback only")
    rng = random.Random(args.seed)
    header = f"{'n':>5} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        mats = [random_flat(n, rng) for _ in range(args.repeats)]
        pure_times, pure_vals = time_kernel(_power_py, mats, n, args.tol, args.max_iter)
        pure_ms = statistics.median(pure_times) * 1000
        if compiled is None:
            print(f"{n:>5} {pure_ms:>12.3f} {'-':>14} {'-':>8}")
            continue
        comp_times, comp_vals = time_kernel(compiled, mats, n, args.tol, args.max_iter)
        comp_ms = statistics.median(comp_times) * 1000
        worst = max(
            abs(p - c) / max(abs(p), 1.0) for p, c in zip(pure_vals, comp_vals)
        )
        if worst > 1e-9:
            print(f"warning: kernels disagree by {worst:.3e} on size {n}")
        speedup = pure_ms / comp_ms if comp_ms > 0 else float("inf")
        print(f"{n:>5} {pure_ms:>12.3f} {comp_ms:>14.3f} {speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
