"""Benchmark the compiled kernels against the pure-Python fallback.

Run with ``python -m prefarg._semantics.bench``. Random defeat graphs of
increasing size are fed to both backends; times are wall-clock medians.
"""

from __future__ import annotations

import random
import statistics
import time
from array import array

from . import _csr, _targets_from, pure

try:
    from . import _speedups
except ImportError:
    _speedups = None


def _random_attackers(n: int, density: float, rng: random.Random) -> list[list[int]]:
    attackers: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                attackers[j].append(i)
    return attackers


def _time(fn, repeats: int = 5) -> float:
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def _bench_grounded(impl, n: int, attackers) -> float:
    targets = _targets_from(attackers)
    ai, aj = _csr(n, attackers)
    ti, tj = _csr(n, targets)
    return _time(lambda: impl.grounded_kernel(n, ai, aj, ti, tj))


def _bench_preferred(impl, n: int, attackers) -> float:
    att_masks = [0] * n
    tgt_masks = [0] * n
    for i, atts in enumerate(attackers):
        for a in atts:
            att_masks[i] |= 1 << a
            tgt_masks[a] |= 1 << i
    return _time(lambda: impl.preferred_kernel(n, att_masks, tgt_masks), repeats=3)


def main() -> None:
    rng = random.Random(20240527)
    print(f"compiled backend available: {_speedups is not None}")
    print()
    print(f"{'kernel':<10} {'n':>6} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for n in (200, 1000, 5000):
        attackers = _random_attackers(n, min(0.02, 40 / n), rng)
        tp = _bench_grounded(pure, n, attackers)
        if _speedups is not None:
            tc = _bench_grounded(_speedups, n, attackers)
            print(f"{'grounded':<10} {n:>6} {tp * 1e3:>10.2f}ms {tc * 1e3:>10.2f}ms "
                  f"{tp / tc:>8.1f}x")
        else:
            print(f"{'grounded':<10} {n:>6} {tp * 1e3:>10.2f}ms {'-':>12}")
    for n in (14, 17, 20):
        attackers = _random_attackers(n, 0.15, rng)
        tp = _bench_preferred(pure, n, attackers)
        if _speedups is not None:
            tc = _bench_preferred(_speedups, n, attackers)
            print(f"{'preferred':<10} {n:>6} {tp * 1e3:>10.2f}ms {tc * 1e3:>10.2f}ms "
                  f"{tp / tc:>8.1f}x")
        else:
            print(f"{'preferred':<10} {n:>6} {tp * 1e3:>10.2f}ms {'-':>12}")


if __name__ == "__main__":
    main()
