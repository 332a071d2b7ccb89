"""Time the compiled canonical-labeling kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_canon.py [--repeat N]
"""

from __future__ import annotations

import argparse
import itertools
import random
import timeit

from hodgecorr import _canon_py


def workload(seed: int = 0) -> list[tuple[int, list[int], list[tuple[int, int]]]]:
    rng = random.Random(seed)
    cases = []
    for n in (6, 8, 10, 12):
        for _ in range(40):
            colors = [rng.randint(0, 2) if rng.random() < 0.5 else 0 for _ in range(n)]
            edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.3]
            cases.append((n, colors, edges))
    # highly symmetric cases stress the individualization search
    for n in (5, 6, 7):
        cases.append((n, [0] * n, list(itertools.combinations(range(n), 2))))
    return cases


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    cases = workload()
    impls = {"python": _canon_py.canonical_leaves}
    try:
        from hodgecorr import _canon_ext

        impls["cython"] = _canon_ext.canonical_leaves
    except ImportError:
        print("compiled kernel not built; timing the fallback only")
    times = {}
    for name, fn in impls.items():
        t = min(timeit.repeat(lambda: [fn(n, list(c), list(e)) for n, c, e in cases], number=1, repeat=args.repeat))
        times[name] = t
        print(f"{name:>7}: {t * 1e3:9.1f} ms for {len(cases)} graphs")
    if len(times) == 2:
        print(f"speedup: {times['python'] / times['cython']:.2f}x")


if __name__ == "__main__":
    main()
