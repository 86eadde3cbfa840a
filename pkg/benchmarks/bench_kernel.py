"""Timing comparison of the pure-Python and compiled arithmetic kernels.

Run from the repository root:

    python3 benchmarks/bench_kernel.py

Each workload is built once from a fixed seed and run on both backends;
results are checked equal before any number is reported.
"""

import random
import time

from cuspfol import _kernel_py as pure

try:
    from cuspfol import _kernel as compiled
except ImportError:
    compiled = None

RNG = random.Random(0xBE7C)


def rand_triple():
    return pure.qnorm(RNG.randint(-99, 99), RNG.randint(-99, 99), RNG.randint(1, 99))


def series(length):
    return [rand_triple() for _ in range(length)]


def jet2(deg):
    return {
        (i, j): rand_triple()
        for i in range(deg + 1)
        for j in range(deg + 1 - i)
    }


def matrix(nrows, width):
    return [series(width) for _ in range(nrows)]


def best_of(fn, repeats=5):
    best = None
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None or dt < best else best
    return best, result


def bench(name, make_args, call):
    args_pure = make_args()
    args_comp = [list(a) if isinstance(a, list) else a for a in args_pure]
    t_pure, r_pure = best_of(lambda: call(pure, *args_pure))
    line = f"{name:<24} pure {t_pure * 1e3:9.2f} ms"
    if compiled is not None:
        t_comp, r_comp = best_of(lambda: call(compiled, *args_comp))
        assert r_comp == r_pure, f"backend mismatch in {name}"
        line += f"   cython {t_comp * 1e3:9.2f} ms   speedup x{t_pure / t_comp:.2f}"
    print(line)


def main():
    print(f"pure backend:     {pure.BACKEND}")
    if compiled is None:
        print("compiled backend: not built (run pip install -e . with a compiler)")
    else:
        print(f"compiled backend: {compiled.BACKEND}")
    print()

    ca, cb = series(65), series(65)
    bench(
        "jet1_mul deg 64",
        lambda: (ca, cb, 64),
        lambda k, a, b, n: [k.jet1_mul(a, b, n) for _ in range(20)],
    )

    da, db = jet2(12), jet2(12)
    bench(
        "jet2_mul deg 12",
        lambda: (da, db, 12),
        lambda k, a, b, n: [k.jet2_mul(a, b, n) for _ in range(20)],
    )

    base = matrix(26, 30)
    bench(
        "rref 26x30",
        lambda: (base,),
        lambda k, rows: (lambda m: (k.rref(m, 26), m))([list(r) for r in rows]),
    )


if __name__ == "__main__":
    main()
