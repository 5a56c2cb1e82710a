"""Time the compiled Clenshaw/Vandermonde kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 20]

Prints one row per kernel and problem size with best-of-N times and the
speedup. The numpy path is vectorized over evaluation points, so the
compiled loops win most on small problems, where per-step array overhead
dominates, and approach parity on large ones.
"""
import argparse
import timeit

import numpy as np

from sloshing import _kernels_py
from sloshing.kernels import compiled_impl


def cases(rng):
    for m, n, p in ((1, 32, 256), (16, 64, 512), (64, 128, 2048)):
        coeffs = rng.normal(size=(m, n))
        x = np.cos(np.linspace(0, np.pi, p))
        yield f"clenshaw_t m={m} n={n} p={p}", "clenshaw_t", (coeffs, x)
        yield f"clenshaw_u m={m} n={n} p={p}", "clenshaw_u", (coeffs, x)
        yield f"vander_t deg={n} p={p}", "vander_t", (n, x)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if compiled_impl is None:
        print("compiled kernels not available; build with `pip install -e . --no-build-isolation`")
        return
    rng = np.random.default_rng(0)
    print(f"{'case':40s} {'numpy [us]':>12s} {'cython [us]':>12s} {'speedup':>8s}")
    for label, name, argv in cases(rng):
        py, cy = getattr(_kernels_py, name), getattr(compiled_impl, name)
        np.testing.assert_allclose(cy(*argv), py(*argv), atol=1e-12)
        t_py = min(timeit.repeat(lambda: py(*argv), number=5, repeat=args.repeat)) / 5
        t_cy = min(timeit.repeat(lambda: cy(*argv), number=5, repeat=args.repeat)) / 5
        print(f"{label:40s} {t_py * 1e6:12.1f} {t_cy * 1e6:12.1f} {t_py / t_cy:8.2f}")


if __name__ == "__main__":
    main()
