"""Compare the numba kernels with their numpy/Python twins.

    python benchmarks/bench_kernels.py [--repeat 3]

Both paths are imported in the same process: the compiled kernels through the
public wrappers, the fallbacks through the ``py_*`` twins. Results are checked
for equality before timings are reported.
"""

import argparse
import time

import numpy as np

from voronoi_bounds import kernels


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    p = 1999
    q = next(1 + m * p for m in range(2, 10_000, 2) if all((1 + m * p) % d for d in range(2, int((1 + m * p) ** 0.5) + 1)))
    eta = pow(3, (q - 1) // p, q)
    gram = np.array([[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 2]])
    return [
        ("bernoulli table p=1999", lambda: kernels.bernoulli_table_mod_p(p, p - 3), lambda: kernels.py_bernoulli_table_mod_p(p, p - 3)),
        ("unit residue p=1999", lambda: kernels.power_residue_product(p, 1000, q, eta, True), lambda: kernels.py_power_residue_product(p, 1000, q, eta, True)),
        ("prime sieve 4e6", lambda: kernels.prime_sieve(4_000_000), lambda: kernels.py_prime_sieve(4_000_000)),
        ("box search n=4 c=6", lambda: kernels.box_short_vectors(gram, 6)[1], lambda: kernels.py_box_short_vectors(gram, 6)[1]),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"backend: {kernels.BACKEND}")
    for name, fast, slow in cases():
        fast()  # compile outside the timing
        tf, a = _best(fast, args.repeat)
        ts, b = _best(slow, args.repeat)
        same = np.array_equal(np.asarray(a), np.asarray(b))
        print(f"{name:24s} compiled {tf * 1e3:9.2f} ms   fallback {ts * 1e3:9.2f} ms   x{ts / tf:6.1f}   equal={same}")


if __name__ == "__main__":
    main()
