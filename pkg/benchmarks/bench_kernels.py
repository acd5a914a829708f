"""Time the compiled and the numpy kernels side by side.

    python3 benchmarks/bench_kernels.py [--length N] [--points M] [--depth D] [--repeat R]
"""

import argparse
import time

import numpy as np

from kolakoski import _kernels as K


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=10**7)
    ap.add_argument("--points", type=int, default=10**6)
    ap.add_argument("--depth", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    digits = K.generate_digits_numpy(args.length)
    ps = np.concatenate(([0], np.cumsum(digits, dtype=np.int64)))
    pts = np.random.default_rng(0).integers(0, args.length // 200, size=args.points).astype(np.int64)

    cases = {
        f"generate n={args.length}": (
            lambda: K.generate_digits_numpy(args.length),
            (lambda: K.generate_digits_numba(args.length)) if K.HAVE_NUMBA else None,
        ),
        f"level_maps m={args.points} depth={args.depth}": (
            lambda: K.level_maps_numpy(ps, pts, args.depth),
            (lambda: K.level_maps_numba(ps, pts, args.depth)) if K.HAVE_NUMBA else None,
        ),
    }
    if K.HAVE_NUMBA:  # compile outside the timed region
        K.generate_digits_numba(10)
        K.level_maps_numba(ps[:11], pts[:1] % 10, 1)
        assert np.array_equal(K.generate_digits_numba(args.length), digits)
        assert np.array_equal(K.level_maps_numba(ps, pts, args.depth), K.level_maps_numpy(ps, pts, args.depth))

    print(f"{'kernel':<36} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for name, (np_fn, nb_fn) in cases.items():
        t_np = best_of(np_fn, args.repeat)
        if nb_fn is None:
            print(f"{name:<36} {t_np:9.4f} {'n/a':>9} {'n/a':>8}")
            continue
        t_nb = best_of(nb_fn, args.repeat)
        print(f"{name:<36} {t_np:9.4f} {t_nb:9.4f} {t_np / t_nb:7.2f}x")


if __name__ == "__main__":
    main()
