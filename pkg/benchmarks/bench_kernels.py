"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from recdef._backend import available


def cases(rng):
    n = 2000
    a, b = rng.uniform(-0.2, 0.2, n + 1), rng.uniform(0.4, 0.6, n + 1)
    z = rng.uniform(-1, 1, 256) + 1e-2j
    zr = rng.uniform(-1, 1, 256)
    tail = np.full(256, -0.5j)
    c = np.zeros(256, dtype=complex)
    d, e = rng.uniform(-1, 1, 400), rng.uniform(0.1, 1, 399)
    return {
        "recurrence  256 pts x 2000": lambda k: k.recurrence(a, b, zr, n),
        "ratio       256 pts x 2000": lambda k: k.ratio(a, b, z, n, c),
        "cont. frac. 256 pts x 2000": lambda k: k.continued_fraction(a, b, tail, z),
        "bisection   400 x 400": lambda k: k.bisect_eigenvalues(d, e),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = available()
    names = sorted(backends)
    print(f"{'kernel':<28s}" + "".join(f"{n:>12s}" for n in names) + "     speedup")
    for label, fn in cases(np.random.default_rng(0)).items():
        times = {}
        for name in names:
            k = backends[name]
            fn(k)
            times[name] = min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
        row = f"{label:<28s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
