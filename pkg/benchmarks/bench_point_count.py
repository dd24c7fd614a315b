"""Compare the compiled and pure-Python point-counting kernels.

    python3 benchmarks/bench_point_count.py [--repeat 3]

Each case is counted once per available backend; counts must agree.
"""
import argparse
import statistics
import sys
import time

from planejets.algebra.counting import KERNELS, fiber_point_count
from planejets.algebra.parser import parse_curve

CASES = [
    ("y^2-x^3", 7, 5),
    ("y^2-x^3", 8, 3),
    ("(y^2-x^3)^2-4*x^6*y-x^9", 8, 3),
    ("y^3-x^5+x^4*y", 7, 3),
]


def time_case(f, m, p, backend, repeat):
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fiber_point_count(f, m, p, backend=backend, with_evaluations=True)
        samples.append(time.perf_counter() - start)
    return result, statistics.median(samples)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = sorted(KERNELS)
    print(f"backends available: {', '.join(backends)}")
    header = f"{'curve':<26} {'m':>2} {'p':>2} {'count':>12} {'evals':>10}"
    header += "".join(f" {b + ' s':>10}" for b in backends)
    if len(backends) > 1:
        header += f" {'speedup':>8}"
    print(header)

    for text, m, p in CASES:
        f = parse_curve(text)
        results, times = {}, {}
        for b in backends:
            results[b], times[b] = time_case(f, m, p, b, args.repeat)
        if len(set(results.values())) != 1:
            print(f"backends disagree on {text} m={m} p={p}: {results}", file=sys.stderr)
            return 1
        count, evals = results[backends[0]]
        row = f"{text:<26} {m:>2} {p:>2} {count:>12} {evals:>10}"
        row += "".join(f" {times[b]:>10.4f}" for b in backends)
        if len(backends) > 1:
            row += f" {times['python'] / times['cython']:>7.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
