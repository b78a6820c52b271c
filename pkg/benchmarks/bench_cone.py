"""Time the compiled cone kernel against the pure-Python one.

    python benchmarks/bench_cone.py [--repeat N]

Each case runs both backends and checks that they agree exactly.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from kacq import cone
from kacq.algebras import build
from kacq.kernels import ct_kernel_theta
from kacq.kostka import string_function_weylsum

CASES = [
    ("route A, A4~2, q^6", lambda b: string_function_weylsum(build("A4~2"), 6, backend=b)),
    ("route A, D4~3, q^6", lambda b: string_function_weylsum(build("D4~3"), 6, backend=b)),
    ("route A, E6~2, q^4", lambda b: string_function_weylsum(build("E6~2"), 4, backend=b)),
    ("ct(mu Theta), A5~2, q^6", lambda b: ct_kernel_theta(build("A5~2"), 12, backend=b)),
    ("ct(mu Theta), E6~2, q^4", lambda b: ct_kernel_theta(build("E6~2"), 8, backend=b)),
]


def _best(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if cone.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'case':<28}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in CASES:
        times, results = [], []
        for b in backends:
            t, r = _best(lambda: fn(b), args.repeat)
            times.append(t)
            results.append(r)
        assert all(r == results[0] for r in results), f"backends disagree on {name}"
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{name:<28}" + "".join(f"{t:11.3f}s" for t in times) + speed)

    # raw kernel on a fixed box, no surrounding bookkeeping
    dims, t1 = (6, 6, 6, 6), 21
    rng = np.random.default_rng(0)
    factors = [cone.Factor(tuple(int(x) for x in rng.integers(0, 3, 4)), tshift=1)
               for _ in range(40)]
    factors = [f for f in factors if any(f.root)]
    row = []
    for b in backends:
        t, _ = _best(lambda: cone.cone_product(dims, t1, 1, factors, backend=b), args.repeat)
        row.append(t)
    speed = f"{row[0] / row[-1]:9.1f}x" if len(row) > 1 else ""
    print(f"{'raw kernel, 6^4 box':<28}" + "".join(f"{t:11.3f}s" for t in row) + speed)


if __name__ == "__main__":
    main()
