"""Odd theta function on C/(Z + tau Z) and its logarithmic derivative.

Arguments are first reduced to the cell ``-1/2 <= Re z0 < 1/2``,
``|Im z0| <= Im(tau)/2``; the series is summed there and the exact
quasi-periodicity factors

    th(z + 1)   = -th(z)
    th(z + tau) = -q^{-1} exp(-2 pi i z) th(z)
    zeta(z + m + N tau) = zeta(z) - 2 pi i N

are applied afterwards.  ``zeta = th'/th`` differs from the Weierstrass zeta
function by a linear term, which drops out of every combination whose
arguments sum to zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "EllipticContext",
    "LatticeReduced",
    "reduce",
    "theta",
    "theta_d1",
    "zeta",
    "zeta_d1",
    "zeta_and_d1",
    "cyclic_coeff",
    "lattice_distance",
    "theta_series_direct",
]

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class EllipticContext:
    tau: complex
    truncation_tol: float = 1e-14
    min_separation: float = 1e-6
    max_terms: int = 500

    def __post_init__(self):
        tau = complex(self.tau)
        object.__setattr__(self, "tau", tau)
        if not (cmath.isfinite(tau) and tau.imag >= 0.1):
            raise DomainError(f"need Im(tau) >= 0.1, got tau={tau}")
        if self.truncation_tol <= 0 or self.min_separation <= 0:
            raise DomainError("tolerances must be positive")

    @property
    def nome(self) -> complex:
        return cmath.exp(1j * math.pi * self.tau)


@dataclass(frozen=True)
class LatticeReduced:
    z0: complex
    m: int
    n_shift: int

    def reconstruct(self, tau: complex) -> complex:
        return self.z0 + self.m + self.n_shift * tau


def _reduce_arrays(z, tau):
    z = np.asarray(z, dtype=np.complex128)
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite argument")
    N = np.rint(z.imag / tau.imag)
    w = z - N * tau
    m = np.floor(w.real + 0.5)
    return w - m, m.astype(np.int64), N.astype(np.int64)


def reduce(z: complex, ctx: EllipticContext) -> LatticeReduced:
    """Split ``z = z0 + m + n_shift * tau`` with ``z0`` in the fundamental cell."""
    z0, m, N = _reduce_arrays(np.array([z]), ctx.tau)
    return LatticeReduced(complex(z0[0]), int(m[0]), int(N[0]))


def lattice_distance(z0, tau):
    """Distance from already reduced points to the nearest lattice point."""
    z0 = np.asarray(z0, dtype=np.complex128)
    best = np.abs(z0)
    for a in (-1, 0, 1):
        for b in (-1, 0, 1):
            if a or b:
                best = np.minimum(best, np.abs(z0 - (a + b * tau)))
    return best


def _series(z0, ctx):
    th, th1, th2, used = _kernels.theta_series(
        z0, ctx.tau, ctx.truncation_tol, ctx.max_terms
    )
    if used >= ctx.max_terms:
        raise ConvergenceError(f"theta series did not converge in {ctx.max_terms} terms")
    return th, th1, th2


def _as_output(values, like):
    if np.ndim(like) == 0:
        return complex(values.reshape(-1)[0])
    return values.reshape(np.shape(like))


def theta(z, ctx: EllipticContext):
    """The odd theta function; accepts a scalar or an array."""
    z0, m, N = _reduce_arrays(np.atleast_1d(z).ravel(), ctx.tau)
    th, _, _ = _series(z0, ctx)
    factor = (-1.0) ** ((m + N) % 2) * np.exp(-1j * math.pi * ctx.tau * N**2 - TWO_PI_I * N * z0)
    return _as_output(factor * th, z)


def theta_d1(z, ctx: EllipticContext):
    """z-derivative of :func:`theta`."""
    z0, m, N = _reduce_arrays(np.atleast_1d(z).ravel(), ctx.tau)
    th, th1, _ = _series(z0, ctx)
    factor = (-1.0) ** ((m + N) % 2) * np.exp(-1j * math.pi * ctx.tau * N**2 - TWO_PI_I * N * z0)
    return _as_output(factor * (th1 - TWO_PI_I * N * th), z)


def _guard(z0, ctx):
    dist = lattice_distance(z0, ctx.tau)
    bad = dist < ctx.min_separation
    if bad.any():
        d = float(dist[bad].min())
        raise PoleError(f"argument within {d:.3g} of a lattice point", distance=d)


def zeta_and_d1(z, ctx: EllipticContext):
    """Return ``(zeta(z), zeta'(z))`` for an array of arguments in one pass."""
    flat = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    z0, _, N = _reduce_arrays(flat, ctx.tau)
    _guard(z0, ctx)
    th, th1, th2 = _series(z0, ctx)
    lg = th1 / th
    zt = lg - TWO_PI_I * N
    zd = th2 / th - lg * lg
    return _as_output(zt, z), _as_output(zd, z)


def zeta(z, ctx: EllipticContext):
    """Logarithmic derivative of :func:`theta`; simple poles on the lattice."""
    return zeta_and_d1(z, ctx)[0]


def zeta_d1(z, ctx: EllipticContext):
    """Derivative of :func:`zeta`; even and fully lattice-periodic."""
    return zeta_and_d1(z, ctx)[1]


def cyclic_coeff(a: complex, b: complex, c: complex, ctx: EllipticContext) -> complex:
    """``2 [zeta(a) + zeta(b) + zeta(c)]`` for ``a + b + c`` on the lattice.

    If the sum is a nonzero lattice vector ``M + K tau`` the value is taken at
    ``(a - M - K tau, b, c)``, which makes the result a function on the curve.
    """
    total = reduce(a + b + c, ctx)
    scale = max(1.0, abs(a), abs(b), abs(c))
    if abs(total.z0) > 1e-9 * scale:
        raise DomainError(f"arguments must sum to a lattice point, residue {abs(total.z0):.3g}")
    za = zeta(np.array([a, b, c]), ctx)
    return complex(2.0 * (za.sum() + TWO_PI_I * total.n_shift))


def theta_series_direct(z: complex, tau: complex, terms: int = 80) -> complex:
    """Plain truncated sine series with no lattice reduction.

    Slow and only accurate for moderate ``|Im z|``; kept as an independent
    reference for tests.
    """
    s = 0j
    for n in range(terms):
        s += 2 * (-1) ** n * cmath.exp(1j * math.pi * tau * (n + 0.5) ** 2) * cmath.sin((2 * n + 1) * math.pi * z)
    return s
