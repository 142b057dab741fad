#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy twin.

    python benchmarks/bench_kernels.py [--dim 3] [--repeat 20000]

The table reports per-call time for each kernel and the speedup of the
compiled extension, plus an end-to-end barycenter timing.
"""

import argparse
import time

import numpy as np

from georegret import _kernels_py as pure

try:
    from georegret import _speedups as compiled
except ImportError:
    compiled = None


def timed(fn, payloads, repeat):
    start = time.perf_counter()
    for i in range(repeat):
        fn(*payloads[i % len(payloads)])
    return (time.perf_counter() - start) / repeat


def ball_points(rng, n, dim):
    pts = rng.standard_normal((n, dim))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return pts * rng.uniform(0.0, 0.85, size=(n, 1))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=20000)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    xs = ball_points(rng, 64, args.dim)
    ys = ball_points(rng, 64, args.dim)
    vs = 0.3 * rng.standard_normal((64, args.dim))

    cases = {
        "exp": [(x, v) for x, v in zip(xs, vs)],
        "log": [(x, y) for x, y in zip(xs, ys)],
        "dist": [(x, y) for x, y in zip(xs, ys)],
        "transport": [(x, y, v) for x, y, v in zip(xs, ys, vs)],
        "inner": [(x, u, v) for x, u, v in zip(xs, vs, vs[::-1])],
    }

    print(f"dim={args.dim}  repeat={args.repeat}")
    header = f"{'kernel':<12}{'pure (us)':>12}{'compiled (us)':>16}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, payloads in cases.items():
        t_pure = timed(getattr(pure, name), payloads, args.repeat) * 1e6
        if compiled is None:
            print(f"{name:<12}{t_pure:>12.2f}{'n/a':>16}{'n/a':>10}")
        else:
            t_comp = timed(getattr(compiled, name), payloads, args.repeat) * 1e6
            print(f"{name:<12}{t_pure:>12.2f}{t_comp:>16.2f}{t_pure / t_comp:>9.1f}x")

    # end-to-end: weighted barycenter of 8 points at tight tolerance
    pts = ball_points(rng, 8, args.dim)
    w = rng.uniform(0.1, 1.0, size=8)
    w /= w.sum()
    n_bary = max(args.repeat // 100, 100)
    t_pure = timed(
        lambda: pure.frechet(pts, w, pts[0].copy(), 1e-10, 200), [()], n_bary
    ) * 1e6
    if compiled is None:
        print(f"{'frechet(8)':<12}{t_pure:>12.2f}{'n/a':>16}{'n/a':>10}")
    else:
        t_comp = timed(
            lambda: compiled.frechet(pts, w, pts[0].copy(), 1e-10, 200), [()], n_bary
        ) * 1e6
        print(f"{'frechet(8)':<12}{t_pure:>12.2f}{t_comp:>16.2f}{t_pure / t_comp:>9.1f}x")

    if compiled is None:
        print("\ncompiled extension not built; run: python setup.py build_ext --inplace")


if __name__ == "__main__":
    main()
