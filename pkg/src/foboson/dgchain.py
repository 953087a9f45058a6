"""Exact verification of the chain-level bivector maps.

A :class:`FiniteChain` is a list of spaces ``V_0..V_m`` with arbitrary maps
``d_i: V_i -> V_{i+1}`` (consecutive composites need not vanish).  Writing
``E_ij = Hom(V_i, V_j)`` as matrices of shape ``dim V_j x dim V_i``, the
module implements the maps

    dh      : (+) E_ii        -> (+) E_{i,i+1}    b   |-> d b_ii - b_{i+1,i+1} d
    dh_vee  : (+) E_{i+1,i}   -> (+) E_ii         a   |-> (-a_10 d, d a_10 - a_21 d, ..., d a_{m,m-1})
    top     : (+) E_{i+1,i}   -> (+) E_ii         a   |-> (a_10 d, d a_10, ..., d a_{m,m-1})
    bottom  : (+) E_ii        -> (+) E_{i,i+1}    b   |-> (0, d b_11, ..., d b_{m-1,m-1})

and a set of checks that certain composites agree.  Each check evaluates
both sides on a basis of its domain and returns the largest absolute entry
of the difference as a :class:`fractions.Fraction`, so a passing check
returns exactly ``Fraction(0)``.  Every identity is homogeneous in ``d``, so
the checks clear denominators first and run in integer arithmetic.

Tuples index components by position: for ``a`` in (+) E_{i+1,i}, ``a[i]`` is
``a_{i+1,i}``; for ``b`` in (+) E_ii, ``b[i]`` is ``b_ii``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .errors import DomainError, ShapeError

__all__ = [
    "FiniteChain",
    "HomElement",
    "rational_matrix",
    "random_chain",
    "dh",
    "dh_vee",
    "dh_vee_sum",
    "bivector_top",
    "bivector_bottom",
    "alt_top",
    "alt_bottom",
    "adjointness_residual",
    "chain_map_check",
    "alt_representative_check",
    "homotopy_h_check",
    "diag1_check",
    "truncation_check",
    "run_all_checks",
    "frac_str",
]

ZERO = Fraction(0)


def rational_matrix(rows) -> np.ndarray:
    """Object array of Fractions; accepts nested lists of ints, strings or Fractions."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Fraction(x)
    return out


# plain ints so that integer chains stay integral
def zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def identity(size: int) -> np.ndarray:
    out = zeros(size, size)
    for i in range(size):
        out[i, i] = 1
    return out


def unit(rows: int, cols: int, r: int, c: int) -> np.ndarray:
    out = zeros(rows, cols)
    out[r, c] = 1
    return out


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class FiniteChain:
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ShapeError(f"dimensions must be positive, got {dims}")
        maps = tuple(rational_matrix(d) if not isinstance(d, np.ndarray) else d for d in self.maps)
        if len(maps) != len(dims) - 1:
            raise ShapeError(f"{len(dims)} spaces need {len(dims) - 1} maps, got {len(maps)}")
        for i, d in enumerate(maps):
            if d.shape != (dims[i + 1], dims[i]):
                raise ShapeError(f"d_{i} has shape {d.shape}, expected {(dims[i + 1], dims[i])}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)

    @property
    def m(self) -> int:
        return len(self.dims) - 1

    def window(self, a: int, b: int) -> "FiniteChain":
        """The truncation ``V_a -> ... -> V_b``."""
        if not 0 <= a <= b <= self.m:
            raise DomainError(f"bad window ({a}, {b}) for a chain of length {self.m}")
        return FiniteChain(self.dims[a : b + 1], self.maps[a:b])

    def square_nonzero(self) -> bool:
        return any(
            any(x != 0 for x in (self.maps[i + 1] @ self.maps[i]).flat)
            for i in range(self.m - 1)
        )

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "maps": [[[frac_str(x) for x in row] for row in d] for d in self.maps],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteChain":
        return cls(tuple(obj["dims"]), tuple(rational_matrix(d) for d in obj["maps"]))


@dataclass(frozen=True, eq=False)
class HomElement:
    """A map ``V_source -> V_target`` inside a given chain."""

    source: int
    target: int
    matrix: np.ndarray

    def check(self, chain: FiniteChain) -> None:
        want = (chain.dims[self.target], chain.dims[self.source])
        if self.matrix.shape != want:
            raise ShapeError(f"E_{self.source}{self.target} element has shape {self.matrix.shape}, expected {want}")


def random_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    nums = rng.integers(-5, 6, size=(rows, cols))
    dens = rng.integers(1, 6, size=(rows, cols))
    out = np.empty((rows, cols), dtype=object)
    for idx in np.ndindex(rows, cols):
        out[idx] = Fraction(int(nums[idx]), int(dens[idx]))
    return out


def random_chain(
    dims: Sequence[int], rng: np.random.Generator, nonzero_square: bool = False, max_tries: int = 100
) -> FiniteChain:
    """Chain with entries ``p/q``, ``p`` in [-5, 5], ``q`` in [1, 5].

    With ``nonzero_square`` the draw is repeated until some ``d_{i+1} d_i``
    is nonzero (needs at least three spaces).
    """
    dims = tuple(dims)
    for _ in range(max_tries):
        chain = FiniteChain(dims, tuple(random_matrix(dims[i + 1], dims[i], rng) for i in range(len(dims) - 1)))
        if not nonzero_square or chain.square_nonzero():
            return chain
    raise DomainError(f"no chain with nonzero square found for dims {dims}")


def _check_shapes(parts, shapes, what):
    if len(parts) != len(shapes):
        raise ShapeError(f"{what}: expected {len(shapes)} components, got {len(parts)}")
    for i, (x, s) in enumerate(zip(parts, shapes)):
        if np.shape(x) != s:
            raise ShapeError(f"{what}: component {i} has shape {np.shape(x)}, expected {s}")


def _diag_shapes(chain):
    return [(d, d) for d in chain.dims]


def _down_shapes(chain):
    # a_{i+1,i}: V_{i+1} -> V_i
    return [(chain.dims[i], chain.dims[i + 1]) for i in range(chain.m)]


def dh(chain: FiniteChain, b) -> tuple:
    _check_shapes(b, _diag_shapes(chain), "dh")
    d = chain.maps
    return tuple(d[i] @ b[i] - b[i + 1] @ d[i] for i in range(chain.m))


def dh_vee(chain: FiniteChain, a) -> tuple:
    _check_shapes(a, _down_shapes(chain), "dh_vee")
    d, m = chain.maps, chain.m
    out = []
    for i in range(m + 1):
        x = zeros(chain.dims[i], chain.dims[i])
        if i >= 1:
            x = x + d[i - 1] @ a[i - 1]
        if i <= m - 1:
            x = x - a[i] @ d[i]
        out.append(x)
    return tuple(out)


def dh_vee_sum(chain: FiniteChain, a) -> tuple:
    """``d o a + a o d`` componentwise: ``a_{i+1,i} d_i + d_{i-1} a_{i,i-1}`` in E_ii."""
    _check_shapes(a, _down_shapes(chain), "dh_vee_sum")
    d, m = chain.maps, chain.m
    out = []
    for i in range(m + 1):
        x = zeros(chain.dims[i], chain.dims[i])
        if i >= 1:
            x = x + d[i - 1] @ a[i - 1]
        if i <= m - 1:
            x = x + a[i] @ d[i]
        out.append(x)
    return tuple(out)


def bivector_top(chain: FiniteChain, a) -> tuple:
    _check_shapes(a, _down_shapes(chain), "bivector_top")
    d, m = chain.maps, chain.m
    if m == 0:
        return (zeros(chain.dims[0], chain.dims[0]),)
    return (a[0] @ d[0],) + tuple(d[i - 1] @ a[i - 1] for i in range(1, m + 1))


def bivector_bottom(chain: FiniteChain, b) -> tuple:
    _check_shapes(b, _diag_shapes(chain), "bivector_bottom")
    d, m = chain.maps, chain.m
    if m == 0:
        return ()
    return (zeros(chain.dims[1], chain.dims[0]),) + tuple(d[i] @ b[i] for i in range(1, m))


def alt_top(chain: FiniteChain, a) -> tuple:
    """Second representative for three spaces: ``(a_10 d, a_21 d, d a_21)``."""
    _require_m2(chain)
    _check_shapes(a, _down_shapes(chain), "alt_top")
    d = chain.maps
    return (a[0] @ d[0], a[1] @ d[1], d[1] @ a[1])


def alt_bottom(chain: FiniteChain, b) -> tuple:
    """Second representative for three spaces: ``(b_11 d, 0)``."""
    _require_m2(chain)
    _check_shapes(b, _diag_shapes(chain), "alt_bottom")
    return (b[1] @ chain.maps[0], zeros(chain.dims[2], chain.dims[1]))


def _integral(chain: FiniteChain) -> tuple[FiniteChain, int]:
    """``(L * chain, L)`` with ``L`` the common denominator, entries as ints."""
    scale = 1
    for d in chain.maps:
        for x in d.flat:
            scale = lcm(scale, Fraction(x).denominator)
    maps = []
    for d in chain.maps:
        out = np.empty(d.shape, dtype=object)
        for idx, x in np.ndenumerate(d):
            out[idx] = int(Fraction(x) * scale)
        maps.append(out)
    return FiniteChain(chain.dims, tuple(maps)), scale


def _rescale(value, scale: int, degree: int) -> Fraction:
    return Fraction(value, scale**degree)


def _require_m2(chain):
    if chain.m != 2:
        raise DomainError(f"this check needs exactly three spaces, got {chain.m + 1}")


def _maxabs(*groups):
    best = 0
    for group in groups:
        for x in group:
            for v in np.asarray(x, dtype=object).flat:
                if abs(v) > best:
                    best = abs(v)
    return best


def _sub(xs, ys):
    return tuple(x - y for x, y in zip(xs, ys))


def _add(xs, ys):
    return tuple(x + y for x, y in zip(xs, ys))


def _basis(shapes):
    """Unit vectors of a direct sum whose components have the given shapes."""
    for slot, (r, c) in enumerate(shapes):
        for i in range(r):
            for j in range(c):
                yield tuple(unit(r, c, i, j) if s == slot else zeros(*shapes[s]) for s in range(len(shapes)))


def _trace_pairing(xs, ys) -> Fraction:
    total = ZERO
    for x, y in zip(xs, ys):
        total += np.trace(x @ y) if x.size and y.size else ZERO
    return total


def adjointness_residual(chain: FiniteChain, a, b) -> Fraction:
    """``<dh_vee(a), b> + <a, dh(b)>`` under the trace pairing; identically zero."""
    return abs(_trace_pairing(dh_vee(chain, a), b) + _trace_pairing(a, dh(chain, b)))


def chain_map_check(chain: FiniteChain) -> Fraction:
    """``bottom o dh_vee - dh o top`` on a basis of (+) E_{i+1,i}."""
    if chain.m < 1:
        raise DomainError("need at least two spaces")
    chain, L = _integral(chain)
    worst = 0
    for a in _basis(_down_shapes(chain)):
        lhs = bivector_bottom(chain, dh_vee(chain, a))
        rhs = dh(chain, bivector_top(chain, a))
        worst = max(worst, _maxabs(_sub(lhs, rhs)))
    return _rescale(worst, L, 2)


def alt_representative_check(chain: FiniteChain) -> dict:
    """The second representative is a chain map homotopic to the first via
    ``H`` = projection onto the middle component."""
    _require_m2(chain)
    chain, L = _integral(chain)

    def H(b):
        return (zeros(*b[0].shape), b[1], zeros(*b[2].shape))

    chain_map = top_h = 0
    for a in _basis(_down_shapes(chain)):
        chain_map = max(
            chain_map,
            _maxabs(_sub(alt_bottom(chain, dh_vee(chain, a)), dh(chain, alt_top(chain, a)))),
        )
        diff = _sub(bivector_top(chain, a), alt_top(chain, a))
        top_h = max(top_h, _maxabs(_sub(diff, H(dh_vee(chain, a)))))
    bottom_h = 0
    for b in _basis(_diag_shapes(chain)):
        diff = _sub(bivector_bottom(chain, b), alt_bottom(chain, b))
        bottom_h = max(bottom_h, _maxabs(_sub(diff, dh(chain, H(b)))))
    return {
        "chainMap": _rescale(chain_map, L, 2),
        "topHomotopy": _rescale(top_h, L, 1),
        "bottomHomotopy": _rescale(bottom_h, L, 1),
    }


def homotopy_h_check(chain: FiniteChain) -> dict:
    """Homotopy between the product structure on two short chains and ``top``.

    Elements of (E00 + E11) + (E11 + E22) are 4-tuples ``(b00, b11, b11', b22)``.
    """
    _require_m2(chain)
    chain, L = _integral(chain)
    d0, d1 = chain.maps
    n0, n1, n2 = chain.dims

    def phi(a):
        a10, a21 = a
        return (a10 @ d0, d0 @ a10, a21 @ d1, d1 @ a21)

    dvee = phi  # the product differential has the same formula

    def partial(B):
        b00, b11, b11p, b22 = B
        return (d0 @ b00 - b11 @ d0, d1 @ b11p - b22 @ d1)

    def Delta(b):
        return (b[0], b[1], b[1], b[2])

    def tau(B):
        b00, b11, b11p, b22 = B
        return (b00, b11 - b11p, b22)

    def h(B):
        _, b11, b11p, _ = B
        return (zeros(n0, n0), zeros(n1, n1), b11 - b11p, zeros(n2, n2))

    first = 0
    for a in _basis(_down_shapes(chain)):
        lhs = _add(phi(a), h(dvee(a)))
        rhs = Delta(bivector_top(chain, a))
        first = max(first, _maxabs(_sub(lhs, rhs)))
    second = 0
    for B in _basis([(n0, n0), (n1, n1), (n1, n1), (n2, n2)]):
        second = max(second, _maxabs(_sub(partial(h(B)), bivector_bottom(chain, tau(B)))))
    return {"phiPlusHomotopy": _rescale(first, L, 1), "partialH": _rescale(second, L, 1)}


def diag1_check(chain: FiniteChain) -> dict:
    """Compatibility of the bivector with the composite ``V_0 -> V_2``.

    Left column: ``a_20 |-> (a_20 d, d a_20) |-> top |-> (E00, E22)`` must equal
    ``(a_20 d^2, d^2 a_20)``.  Right column:
    ``(b00, b22) |-> (b00, 0, b22) |-> bottom |-> d c_01 + c_12 d`` must vanish.
    """
    _require_m2(chain)
    chain, L = _integral(chain)
    d0, d1 = chain.maps
    n0, n1, n2 = chain.dims
    dd = d1 @ d0
    left = 0
    for (a20,) in _basis([(n0, n2)]):
        top = bivector_top(chain, (a20 @ d1, d0 @ a20))
        left = max(left, _maxabs(_sub((top[0], top[2]), (a20 @ dd, dd @ a20))))
    right = 0
    for b00, b22 in _basis([(n0, n0), (n2, n2)]):
        c01, c12 = bivector_bottom(chain, (b00, zeros(n1, n1), b22))
        right = max(right, _maxabs((d1 @ c01 + c12 @ d0,)))
    return {"left": _rescale(left, L, 2), "right": _rescale(right, L, 2)}


def truncation_check(chain: FiniteChain, a: int, b: int) -> dict:
    """Compare the bivector maps of ``V_a..V_b`` with those of the full chain.

    * ``dualDifferential``: ``d o ? + ? o d`` of the window equals the
      restriction of the full one (no correction needed).
    * ``imageSupport``: the full ``top`` sends window inputs into window
      components only.
    * ``topHomotopy`` / ``bottomHomotopy``: the window's ``(top, bottom)``
      differ from the restricted full maps by the homotopy ``H = -pr_a``
      (zero when ``a == 0``): ``top_w - top|  = H o dh_vee_w`` and
      ``bottom_w - bottom| = dh_w o H``.  The only discrepancy is the term
      ``a_{a+1,a} d_a`` in E_aa, which the window's first component picks up.
    """
    win = chain.window(a, b)
    chain, L = _integral(chain)
    win = chain.window(a, b)

    def embed_down(x):
        # window slot s holds a_{a+s+1, a+s}
        full = [zeros(*s) for s in _down_shapes(chain)]
        for s, part in enumerate(x):
            full[a + s] = part
        return tuple(full)

    def embed_diag(y):
        full = [zeros(dd, dd) for dd in chain.dims]
        for s, part in enumerate(y):
            full[a + s] = part
        return tuple(full)

    def H(y):
        if a == 0 or not y:
            return tuple(zeros(*p.shape) for p in y)
        return (-y[0],) + tuple(zeros(*p.shape) for p in y[1:])

    dual = support = top_h = 0
    for x in _basis(_down_shapes(win)):
        full_x = embed_down(x)
        full_sum = dh_vee_sum(chain, full_x)
        dual = max(dual, _maxabs(_sub(dh_vee_sum(win, x), full_sum[a : b + 1])))
        full_top = bivector_top(chain, full_x)
        outside = full_top[:a] + full_top[b + 1 :] + full_sum[:a] + full_sum[b + 1 :]
        support = max(support, _maxabs(outside))
        diff = _sub(bivector_top(win, x), full_top[a : b + 1])
        top_h = max(top_h, _maxabs(_sub(diff, H(dh_vee(win, x)))))
    bottom_h = 0
    if win.m >= 1:
        for y in _basis(_diag_shapes(win)):
            full_bottom = bivector_bottom(chain, embed_diag(y))
            diff = _sub(bivector_bottom(win, y), full_bottom[a:b])
            bottom_h = max(bottom_h, _maxabs(_sub(diff, dh(win, H(y)))))
    return {
        "dualDifferential": _rescale(dual, L, 1),
        "imageSupport": _rescale(support, L, 1),
        "topHomotopy": _rescale(top_h, L, 1),
        "bottomHomotopy": _rescale(bottom_h, L, 1),
    }


def run_all_checks(chain: FiniteChain, rng: np.random.Generator | None = None) -> list[dict]:
    """Every applicable check on one chain, as ``{"check", "residual", "pass"}`` rows.

    Checks that need exactly three spaces are skipped for other lengths.
    Truncation is run on every window.  ``rng`` drives the random pair used
    for the adjointness identity.
    """
    rows = []

    def add(name, value):
        rows.append({"check": name, "residual": "0" if value == 0 else frac_str(value), "pass": value == 0})

    if chain.m >= 1:
        add("chain_map", chain_map_check(chain))
    if chain.m == 2:
        for key, val in alt_representative_check(chain).items():
            add(f"alt_representative.{key}", val)
        for key, val in homotopy_h_check(chain).items():
            add(f"homotopy_h.{key}", val)
        for key, val in diag1_check(chain).items():
            add(f"diag1.{key}", val)
    for lo in range(chain.m + 1):
        for hi in range(lo, chain.m + 1):
            for key, val in truncation_check(chain, lo, hi).items():
                add(f"truncation[{lo},{hi}].{key}", val)
    if rng is not None:
        a = tuple(random_matrix(r, c, rng) for r, c in _down_shapes(chain))
        b = tuple(random_matrix(r, c, rng) for r, c in _diag_shapes(chain))
        add("adjointness", adjointness_residual(chain, a, b))
    return rows
