"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 200] [--n 3]

Times the raw series product and Horner kernels, then a full evaluation of
the fundamental tensors and of the connection, under each available backend.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hexfinsler.connection import spray_and_connection
from hexfinsler.finsler import metric_sample, zoo
from hexfinsler.jets import _backend, get_ring


def _best(fn, repeat):
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        best = min(best, (time.perf_counter() - t0) / repeat)
    return best


def run(n, repeat):
    rng = np.random.default_rng(0)
    ring = get_ring(n, 1, 5)
    a, b = rng.normal(size=ring.size), rng.normal(size=ring.size)
    h = rng.normal(size=ring.size)
    h[0] = 0.0
    coef = rng.normal(size=7)
    args = (ring.ia, ring.ib, ring.ic, ring.size)
    space = zoo("randers_x", n)
    x = rng.uniform(-0.3, 0.3, n)
    y = rng.normal(size=n)

    rows = []
    for name in _backend.available():
        k = _backend.get(name)
        prev = _backend.set_backend(name)
        try:
            rows.append((name,
                         _best(lambda: k.mul(a, b, *args), repeat),
                         _best(lambda: k.horner(coef, h, *args), repeat),
                         _best(lambda: metric_sample(space, x, y), max(1, repeat // 20)),
                         _best(lambda: spray_and_connection(space, x, y), max(1, repeat // 50))))
        finally:
            _backend.set_backend(prev)
    print(f"ring n={n}, x_order=1, y_order=5: {ring.size} coefficients, {len(ring.ia)} products")
    print(f"{'backend':<8} {'mul':>12} {'horner':>12} {'metric':>12} {'connection':>12}")
    for name, *times in rows:
        print(f"{name:<8} " + " ".join(f"{1e6 * t:>10.1f}us" for t in times))
    if len(rows) == 2:
        ratio = [p / c for p, c in zip(rows[0][1:], rows[1][1:])]
        print("speed-up " + " ".join(f"{r:>11.1f}x" for r in ratio))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--n", type=int, default=3)
    args = parser.parse_args(argv)
    run(args.n, args.repeat)


if __name__ == "__main__":
    main()
