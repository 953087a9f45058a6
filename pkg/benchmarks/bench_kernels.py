"""Compare the numba and numpy theta-series kernels on reduced arguments.

Run: python3 benchmarks/bench_kernels.py --points 2000 --repeats 20 --tau 0.3+1.1i
"""
import argparse
import time

import numpy as np

from foboson import _kernels
from foboson.cli import parse_tau


def best_of(func, z, tau, tol, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = func(z, tau, tol, 500)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--tau", default="i")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    tau = parse_tau(args.tau)
    rng = np.random.default_rng(args.seed)
    # points in the reduced cell, which is all the kernels ever see
    z = rng.uniform(-0.5, 0.5, args.points) + 1j * rng.uniform(-0.5, 0.5, args.points) * tau.imag

    # first call compiles
    _kernels.theta_series_numba(z[:2], tau, args.tol, 500)

    t_np, out_np = best_of(_kernels.theta_series_numpy, z, tau, args.tol, args.repeats)
    t_nb, out_nb = best_of(_kernels.theta_series_numba, z, tau, args.tol, args.repeats)
    diff = max(float(np.max(np.abs(a - b))) for a, b in zip(out_np[:3], out_nb[:3]))

    print(f"points: {args.points}  tau: {tau}  active backend: {_kernels.BACKEND}")
    print(f"numpy  best of {args.repeats}: {t_np * 1e3:.3f} ms")
    print(f"numba  best of {args.repeats}: {t_nb * 1e3:.3f} ms")
    print(f"speedup: {t_np / max(t_nb, 1e-12):.2f}x   max |difference|: {diff:.2e}")


if __name__ == "__main__":
    main()
