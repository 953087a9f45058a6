"""Theta-series kernels.

Both backends evaluate, for reduced arguments ``z``,

    th(z)   = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z)
    th'(z), th''(z)

with ``q = exp(i pi tau)``.  Summation stops once the next term of each of
the three series is below ``tol * max(1, |partial sum|)``.  The returned term
count equals ``max_terms`` when that never happened.
"""
import cmath
import math

import numpy as np

from . import _jit

__all__ = ["theta_series", "theta_series_numba", "theta_series_numpy", "BACKEND"]


def _theta_series_loop(z, tau, tol, max_terms):
    m = z.shape[0]
    th = np.zeros(m, dtype=np.complex128)
    th1 = np.zeros(m, dtype=np.complex128)
    th2 = np.zeros(m, dtype=np.complex128)
    used = 0
    ipt = 1j * math.pi * tau
    for j in range(m):
        s0 = 0j
        s1 = 0j
        s2 = 0j
        n = 0
        while n < max_terms:
            w = (2 * n + 1) * math.pi
            h = n + 0.5
            c = cmath.exp(ipt * h * h)
            if n % 2 == 1:
                c = -c
            arg = w * z[j]
            sn = cmath.sin(arg)
            cs = cmath.cos(arg)
            t0 = 2.0 * c * sn
            t1 = 2.0 * c * w * cs
            t2 = -2.0 * c * w * w * sn
            s0 += t0
            s1 += t1
            s2 += t2
            n += 1
            if (
                abs(t0) < tol * max(1.0, abs(s0))
                and abs(t1) < tol * max(1.0, abs(s1))
                and abs(t2) < tol * max(1.0, abs(s2))
                and n > 1
            ):
                break
        th[j] = s0
        th1[j] = s1
        th2[j] = s2
        if n > used:
            used = n
    return th, th1, th2, used


theta_series_numba = _jit.njit(cache=True)(_theta_series_loop) if _jit.HAS_NUMBA else None


def theta_series_numpy(z, tau, tol, max_terms):
    z = np.asarray(z, dtype=np.complex128)
    th = np.zeros_like(z)
    th1 = np.zeros_like(z)
    th2 = np.zeros_like(z)
    ipt = 1j * np.pi * tau
    live = np.ones(z.shape, dtype=bool)
    n = 0
    while n < max_terms and live.any():
        w = (2 * n + 1) * np.pi
        c = np.exp(ipt * (n + 0.5) ** 2) * (-1) ** n
        zl = z[live]
        sn = np.sin(w * zl)
        t0 = 2.0 * c * sn
        t1 = 2.0 * c * w * np.cos(w * zl)
        t2 = -2.0 * c * w * w * sn
        th[live] += t0
        th1[live] += t1
        th2[live] += t2
        n += 1
        if n > 1:
            done = (
                (np.abs(t0) < tol * np.maximum(1.0, np.abs(th[live])))
                & (np.abs(t1) < tol * np.maximum(1.0, np.abs(th1[live])))
                & (np.abs(t2) < tol * np.maximum(1.0, np.abs(th2[live])))
            )
            idx = np.flatnonzero(live)
            live[idx[done]] = False
    return th, th1, th2, n


BACKEND = "numba" if _jit.USE_JIT else "numpy"


def theta_series(z, tau, tol, max_terms):
    """Dispatch to the active backend. ``z`` is a 1-d complex array."""
    z = np.ascontiguousarray(z, dtype=np.complex128).reshape(-1)
    if BACKEND == "numba":
        return theta_series_numba(z, complex(tau), float(tol), int(max_terms))
    return theta_series_numpy(z, complex(tau), float(tol), int(max_terms))
