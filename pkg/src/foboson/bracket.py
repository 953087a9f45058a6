"""Poisson bivector of the bosonization chart and its numerical checks.

Coordinates are ``u_1..u_n`` (points on C/(Z + tau Z)) and
``v_j = log(y_j / y_1)`` for ``j = 2..n``.  In these coordinates

    {u_a, u_b} = 0
    {v_j, u_k} = delta_jk - delta_1k
    {v_j, v_k} = 2 [zeta(u_1 - u_k) + zeta(u_k - u_j) + zeta(u_j - u_1)]

so the bivector depends on the points only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .elliptic import EllipticContext, _reduce_arrays, lattice_distance, zeta_and_d1
from .errors import DomainError

__all__ = [
    "BosonChart",
    "BivectorMatrix",
    "coordinate_order",
    "random_chart",
    "bracket_matrix",
    "bracket_derivatives",
    "bracket_derivatives_fd",
    "jacobiator",
    "jacobiator_fd",
    "jacobiator_scale",
    "all_jacobiators",
    "log_theta_gradient",
    "prime_bracket_check",
    "lattice_invariance_check",
]


@dataclass(frozen=True, eq=False)
class BosonChart:
    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128).reshape(-1)
        vals = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if pts.size < 2:
            raise DomainError("a chart needs at least two points")
        if pts.size != vals.size:
            raise DomainError(f"{pts.size} points but {vals.size} values")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
            raise DomainError("chart coordinates must be finite")
        if np.any(vals == 0):
            raise DomainError("all values y_i must be nonzero")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.points.size

    def separation(self, tau: complex) -> float:
        """Smallest distance between two points on the curve."""
        i, j = np.triu_indices(self.n, 1)
        z0, _, _ = _reduce_arrays(self.points[i] - self.points[j], complex(tau))
        return float(lattice_distance(z0, complex(tau)).min())

    def validate(self, ctx: EllipticContext) -> None:
        sep = self.separation(ctx.tau)
        if sep < ctx.min_separation:
            raise DomainError(f"points collide on the curve (separation {sep:.3g})")

    def shifted(self, index: int, shift: complex) -> "BosonChart":
        pts = self.points.copy()
        pts[index] += shift
        return BosonChart(pts, self.values)

    def to_json(self, tau: complex) -> dict:
        return {
            "tau": [tau.real, tau.imag],
            "points": [[z.real, z.imag] for z in self.points],
            "values": [[z.real, z.imag] for z in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> tuple["BosonChart", complex]:
        tau = complex(*obj["tau"])
        pts = [complex(*p) for p in obj["points"]]
        vals = [complex(*v) for v in obj["values"]]
        return cls(np.array(pts), np.array(vals)), tau


def coordinate_order(n: int) -> list[str]:
    return [f"u{a}" for a in range(1, n + 1)] + [f"v{j}" for j in range(2, n + 1)]


@dataclass(frozen=True, eq=False)
class BivectorMatrix:
    order: tuple[str, ...]
    entries: np.ndarray

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            return int(label)
        try:
            return self.order.index(label)
        except ValueError:
            raise DomainError(f"unknown coordinate {label!r}") from None

    def __getitem__(self, key):
        a, b = key
        return self.entries[self.index(a), self.index(b)]

    def to_json(self) -> dict:
        return {
            "coordinateOrder": list(self.order),
            "matrix": [[[z.real, z.imag] for z in row] for row in self.entries],
        }


def random_chart(n: int, ctx: EllipticContext, rng: np.random.Generator, max_tries: int = 10_000):
    """Uniform points in the fundamental cell, rejecting near-collisions.

    Returns ``(chart, rejections)``.
    """
    if n < 2:
        raise DomainError("need n >= 2")
    for tries in range(max_tries):
        s, t = rng.random(n), rng.random(n)
        pts = s + t * ctx.tau
        vals = np.exp(rng.normal(size=n) + 1j * rng.uniform(-np.pi, np.pi, size=n))
        chart = BosonChart(pts, vals)
        if chart.separation(ctx.tau) >= ctx.min_separation:
            return chart, tries
    raise DomainError(f"could not draw a separated chart in {max_tries} tries")


def _zeta_tables(points, ctx):
    n = points.size
    i, j = np.nonzero(~np.eye(n, dtype=bool))
    zt, zd = zeta_and_d1(points[i] - points[j], ctx)
    Z = np.zeros((n, n), dtype=np.complex128)
    Zd = np.zeros((n, n), dtype=np.complex128)
    Z[i, j] = zt
    Zd[i, j] = zd
    return Z, Zd


def _assemble(points, ctx):
    n = points.size
    Z, _ = _zeta_tables(points, ctx)
    N = 2 * n - 1
    P = np.zeros((N, N), dtype=np.complex128)
    for j in range(1, n):
        row = n + j - 1
        P[row, j] += 1.0
        P[row, 0] -= 1.0
    P[:n, n:] = -P[n:, :n].T
    for j, k in combinations(range(1, n), 2):
        val = 2.0 * (Z[0, k] + Z[k, j] + Z[j, 0])
        P[n + j - 1, n + k - 1] = val
        P[n + k - 1, n + j - 1] = -val
    return P


def bracket_matrix(chart: BosonChart, ctx: EllipticContext) -> BivectorMatrix:
    chart.validate(ctx)
    return BivectorMatrix(tuple(coordinate_order(chart.n)), _assemble(chart.points, ctx))


def bracket_derivatives(chart: BosonChart, ctx: EllipticContext) -> np.ndarray:
    """``D[a, b, m] = d Pi[a, b] / d u_m`` from zeta'; only the v-v block is nonzero."""
    chart.validate(ctx)
    n = chart.n
    _, Zd = _zeta_tables(chart.points, ctx)
    D = np.zeros((2 * n - 1, 2 * n - 1, n), dtype=np.complex128)
    eye = np.eye(n)
    for j, k in combinations(range(1, n), 2):
        g = 2.0 * (
            Zd[0, k] * (eye[0] - eye[k])
            + Zd[k, j] * (eye[k] - eye[j])
            + Zd[j, 0] * (eye[j] - eye[0])
        )
        D[n + j - 1, n + k - 1] = g
        D[n + k - 1, n + j - 1] = -g
    return D


def bracket_derivatives_fd(chart: BosonChart, ctx: EllipticContext, step: float) -> np.ndarray:
    """Central differences of :func:`bracket_matrix` in each ``u_m``."""
    if not 1e-6 <= step <= 1e-3:
        raise DomainError(f"step must lie in [1e-6, 1e-3], got {step}")
    chart.validate(ctx)
    n = chart.n
    D = np.zeros((2 * n - 1, 2 * n - 1, n), dtype=np.complex128)
    for m in range(n):
        plus = chart.points.copy()
        minus = chart.points.copy()
        plus[m] += step
        minus[m] -= step
        D[:, :, m] = (_assemble(plus, ctx) - _assemble(minus, ctx)) / (2 * step)
    return D


def _jacobi(P, D, a, b, c):
    n = D.shape[2]
    # only u-coordinates carry a derivative
    return (
        P[:n, a] @ D[b, c]
        + P[:n, b] @ D[c, a]
        + P[:n, c] @ D[a, b]
    )


def _triple_indices(order, triple):
    idx = []
    for lab in triple:
        if isinstance(lab, (int, np.integer)):
            idx.append(int(lab))
        elif lab in order:
            idx.append(order.index(lab))
        else:
            raise DomainError(f"unknown coordinate {lab!r}")
    if len(set(idx)) != 3:
        raise DomainError(f"labels must be three distinct coordinates, got {triple}")
    return idx


def jacobiator(chart: BosonChart, triple, ctx: EllipticContext) -> complex:
    """Jacobiator of three coordinates with analytic derivatives.

    Labels are coordinate names (``"u1"``, ``"v3"``) or positions in
    :func:`coordinate_order`.
    """
    order = coordinate_order(chart.n)
    a, b, c = _triple_indices(order, triple)
    D = bracket_derivatives(chart, ctx)
    return complex(_jacobi(_assemble(chart.points, ctx), D, a, b, c))


def jacobiator_fd(chart: BosonChart, triple, ctx: EllipticContext, step: float = 1e-4) -> complex:
    """Same as :func:`jacobiator`, derivatives by central differences."""
    order = coordinate_order(chart.n)
    a, b, c = _triple_indices(order, triple)
    D = bracket_derivatives_fd(chart, ctx, step)
    return complex(_jacobi(_assemble(chart.points, ctx), D, a, b, c))


def all_jacobiators(chart: BosonChart, ctx: EllipticContext, step: float | None = None) -> dict:
    """Jacobiator on every unordered triple of coordinates.

    With ``step`` set, derivatives come from finite differences.
    """
    chart.validate(ctx)
    P = _assemble(chart.points, ctx)
    D = bracket_derivatives(chart, ctx) if step is None else bracket_derivatives_fd(chart, ctx, step)
    order = coordinate_order(chart.n)
    return {
        (order[a], order[b], order[c]): complex(_jacobi(P, D, a, b, c))
        for a, b, c in combinations(range(len(order)), 3)
    }


def jacobiator_scale(chart: BosonChart, ctx: EllipticContext) -> float:
    """Largest |zeta'| over point differences, floored at 1."""
    _, Zd = _zeta_tables(chart.points, ctx)
    return max(1.0, float(np.abs(Zd).max()))


def _report(residual, tol, **extra):
    out = {"maxResidual": float(residual), "tolerance": float(tol), "pass": bool(residual < tol)}
    out.update(extra)
    return out


def log_theta_gradient(chart: BosonChart, ctx: EllipticContext) -> np.ndarray:
    """``G[j-2, m] = d f_j / d u_m`` for the corrections

        f_j = sum_{m != j} log th(u_m - u_j) - sum_{m != 1} log th(u_m - u_1),

    built from zeta so no logarithm is ever taken.
    """
    n = chart.n
    Z, _ = _zeta_tables(chart.points, ctx)
    A = Z.T.copy()  # A[j, m] = zeta(u_m - u_j)
    A[np.diag_indices(n)] = -Z.sum(axis=0)
    return A[1:] - A[0]


def prime_bracket_check(chart: BosonChart, ctx: EllipticContext, tol: float = 1e-9) -> dict:
    """Brackets of ``w_j = v_j + f_j(u)``, i.e. of ``log(y'_j / y'_1)``.

    Reports the largest ``|{w_j, w_k}|`` and the largest deviation of
    ``{w_j, u_k}`` from ``delta_jk - delta_1k``.
    """
    chart.validate(ctx)
    n = chart.n
    P = _assemble(chart.points, ctx)
    T = np.eye(2 * n - 1, dtype=np.complex128)
    T[n:, :n] = log_theta_gradient(chart, ctx)
    Q = T @ P @ T.T
    vv = float(np.abs(Q[n:, n:]).max()) if n > 2 else 0.0
    target = np.zeros((n - 1, n))
    target[np.arange(n - 1), np.arange(1, n)] = 1.0
    target[:, 0] = -1.0
    vu = float(np.abs(Q[n:, :n] - target).max())
    return _report(max(vv, vu), tol, vvResidual=vv, vuResidual=vu)


def lattice_invariance_check(
    chart: BosonChart, ctx: EllipticContext, tol: float = 1e-9, shifts=None
) -> dict:
    """Largest change of the bivector under ``u_i -> u_i + s``, ``s`` in {1, tau}."""
    base = bracket_matrix(chart, ctx).entries
    if shifts is None:
        shifts = (1.0, ctx.tau)
    worst = 0.0
    for i in range(chart.n):
        for s in shifts:
            moved = bracket_matrix(chart.shifted(i, s), ctx).entries
            worst = max(worst, float(np.abs(moved - base).max()))
    return _report(worst, tol)
