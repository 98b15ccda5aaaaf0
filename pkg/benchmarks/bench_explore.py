"""Compare the compiled and pure-Python class explorers.

    python3 benchmarks/bench_explore.py [--repeat N]
"""

import argparse
import itertools
import statistics
import time

from binodec import _explore_py
from binodec import congruence as cg
from binodec.lattice import IntMat

try:
    from binodec import _explore as _compiled
except ImportError:
    _compiled = None


def slice_workload(q, d):
    """Degree-preserving moves: the class of d*e_1 is the whole degree-d slice."""
    moves = [tuple(1 if i == j else -1 if i == j + 1 else 0 for i in range(q)) for j in range(q - 1)]
    return [((d,) + (0,) * (q - 1), moves, [])]


def concrete_workload():
    M = IntMat.from_rows([[1, -5, 0], [-1, 1, -1], [0, 3, 1]])
    moves = list(cg.moves_from_columns(M).moves)
    return [(p, moves, []) for d in range(12) for p in cg.points_of_degree(3, d)]


def two_by_two_workload():
    jobs = []
    for a, b, c, d in itertools.product(range(1, 6), repeat=4):
        if a * d == b * c:
            continue
        moves = [(a, -c), (b, -d)]
        jobs += [((s, t), moves, []) for s in range(6) for t in range(6)]
    return jobs


WORKLOADS = {
    "slice N^4, degree 25": lambda: slice_workload(4, 25),
    "slice N^5, degree 14": lambda: slice_workload(5, 14),
    "concrete 3x3, degree <= 11": concrete_workload,
    "2x2 sweep, 576 matrices": two_by_two_workload,
}


def timed(fn, jobs, repeat):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for gamma, moves, kgens in jobs:
            fn(gamma, moves, kgens, 10**7)
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled extension not built; only the Python kernel is available")
    print(f"{'workload':<30} {'jobs':>6} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, make in WORKLOADS.items():
        jobs = make()
        tp = timed(_explore_py.explore, jobs, args.repeat)
        if _compiled is not None:
            tc = timed(_compiled.explore, jobs, args.repeat)
            print(f"{name:<30} {len(jobs):>6} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")
        else:
            print(f"{name:<30} {len(jobs):>6} {tp:>10.4f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
