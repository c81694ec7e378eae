"""Benchmark the leapfrog kernel: numba-compiled vs pure-numpy fallback.

Usage: python3 benchmarks/bench_leapfrog.py [--nx 2000] [--nt 4000] [--repeat 5]

Runs the identical simulation through both kernels, reports wall times and
speedup, and verifies the outputs are bitwise identical.
"""

import argparse
import time

import numpy as np

from locpv._kernels import numba_enabled
from locpv.field import Grid1x1
from locpv.simulate import SimSpec, run


def build_spec(nx, nt):
    length, duration = 20.0, 0.8 * 20.0 * nt / nx
    g = Grid1x1(-10.0, length / nx, nx, 0.0, duration / nt, nt)
    pulse = lambda x: np.exp(-(((x + 5.0) / 0.7) ** 2))
    pulse_dx = lambda x: -2.0 * (x + 5.0) / 0.7 ** 2 * pulse(x)
    return SimSpec(g, 1.0, 0.05, pulse, lambda x: -pulse_dx(x))


def bench(spec, kernel, repeat):
    run(spec, force_kernel=kernel)  # warm-up (jit compile, caches)
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = run(spec, force_kernel=kernel)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nx", type=int, default=2000)
    ap.add_argument("--nt", type=int, default=4000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    spec = build_spec(args.nx, args.nt)
    t_np, out_np = bench(spec, "numpy", args.repeat)
    print(f"numpy  kernel: {t_np * 1e3:8.2f} ms  ({args.nx}x{args.nt} grid)")

    if not numba_enabled():
        print("numba kernel unavailable (not installed or LOCPV_NUMBA disabled)")
        return

    t_nb, out_nb = bench(spec, "numba", args.repeat)
    print(f"numba  kernel: {t_nb * 1e3:8.2f} ms  ({args.nx}x{args.nt} grid)")
    print(f"speedup      : {t_np / t_nb:8.2f}x")
    same = np.array_equal(out_np.values, out_nb.values)
    print(f"bitwise equal: {same}")
    if not same:
        raise SystemExit("kernel outputs differ")


if __name__ == "__main__":
    main()
