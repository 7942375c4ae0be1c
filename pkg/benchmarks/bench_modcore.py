"""Compare the compiled and numpy GF(p) row-reduction kernels.

    python3 benchmarks/bench_modcore.py [--sizes 200,400,600] [--repeat 3]

Matrices are sparse and rank deficient, like the screening and filtration
blocks the package reduces.  Both kernels must return the same pivots and
the same reduced matrix.
"""

import argparse
import time

import numpy as np

from affine_brylinski import _backend
from affine_brylinski.linalg import PRIMES


def sample(n, rng, density=0.05):
    m = n - n // 5
    a = rng.integers(-3, 4, size=(m, n)) * (rng.random((m, n)) < density)
    # force dependent rows
    a[m // 2:] = a[: m - m // 2] + a[m // 4: m // 4 + m - m // 2]
    return a.astype(np.int64) % PRIMES[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="200,400,600")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = _backend.kernels()
    rng = np.random.default_rng(1)
    p = PRIMES[0]
    print(f"selected backend: {_backend.BACKEND}; available: {', '.join(sorted(impls))}")
    print(f"{'size':>6} " + " ".join(f"{k:>12}" for k in sorted(impls)) + "   speedup")
    for n in (int(s) for s in args.sizes.split(",")):
        base = sample(n, rng)
        best = {}
        results = {}
        for name, fn in sorted(impls.items()):
            times = []
            for _ in range(args.repeat):
                a = base.copy()
                t0 = time.perf_counter()
                piv = fn(a, p)
                times.append(time.perf_counter() - t0)
            best[name] = min(times)
            results[name] = (list(piv), a)
        ref = results["python"]
        for name, (piv, a) in results.items():
            if piv != ref[0] or not np.array_equal(a, ref[1]):
                raise SystemExit(f"kernel {name} disagrees with the numpy fallback at n={n}")
        speed = best["python"] / best["cython"] if "cython" in best else float("nan")
        print(f"{n:>6} " + " ".join(f"{best[k]:>11.4f}s" for k in sorted(impls)) +
              f"   {speed:6.1f}x")


if __name__ == "__main__":
    main()
