#!/usr/bin/env python3
"""Benchmark: compiled shift kernel vs the pure-Python fallback.

Times the in-order cell scan (sum + max) that dominates the exhaustive
shift checks, at several depths, for a conservative insertion bettor.
Results are exact in both backends and asserted equal here.

Run:  python benchmarks/bench_shiftcore.py [max_depth]
"""

import sys
import time

from dymart import _shiftcore_py as pure
from dymart.martingale import conservative_transform
from dymart.tightness import z_bettor

try:
    from dymart import _shiftcore as compiled
except ImportError:
    compiled = None


def timed(fn, *args, repeat=3):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return result, best


def main():
    max_depth = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    mart = conservative_transform(z_bettor("pow2"))
    desc = mart.product_form.descriptor()

    print(f"strategy: {mart.name}")
    print(f"compiled backend: {'yes' if compiled else 'NOT BUILT'}")
    print(f"{'depth':>6} {'cells':>10} {'pure (s)':>10} {'cython (s)':>11} "
          f"{'speedup':>8}")
    for n in range(12, max_depth + 1, 2):
        classes = mart.product_form.classes(n)
        a, b = (1 << n) // 5, (9 * (1 << n)) // 10
        got_pure, t_pure = timed(pure.range_sum_max, desc, classes, n, a, b)
        if compiled is not None:
            got_cy, t_cy = timed(compiled.range_sum_max, desc, classes, n,
                                 a, b)
            from fractions import Fraction
            assert Fraction(got_pure[0], 1 << got_pure[1]) == \
                Fraction(got_cy[0], 1 << got_cy[1]), "backends disagree"
            assert Fraction(got_pure[2], 1 << got_pure[3]) == \
                Fraction(got_cy[2], 1 << got_cy[3]), "backends disagree"
            print(f"{n:>6} {b - a:>10} {t_pure:>10.4f} {t_cy:>11.4f} "
                  f"{t_pure / t_cy:>7.1f}x")
        else:
            print(f"{n:>6} {b - a:>10} {t_pure:>10.4f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
