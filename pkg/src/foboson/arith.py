"""Exact integer calculus of negative continued fractions and slope data.

Everything here works over ``int`` and :class:`fractions.Fraction`; there is
no floating point in this module.

For coprime ``0 < k < n`` the expansion

    n/k = n_1 - 1/(n_2 - 1/(... - 1/n_p)),   n_i >= 2

determines convergents ``n(i) = D(n_1..n_{p-i})``, ``k(i) = D(n_2..n_{p-i})``
(``D`` the tridiagonal determinant), the subquotient classes
``(r(i), d(i))`` and their slopes ``s(i) = d(i)/r(i)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DomainError

__all__ = [
    "KClass",
    "ChainInvariants",
    "PartitionBlocks",
    "ImageDescriptor",
    "negative_cf",
    "eval_negative_cf",
    "tridiag_det",
    "chain_invariants",
    "euler_form",
    "tau_partition",
    "slope_classes",
    "dim_end",
    "image_descriptor",
    "lambda_degrees",
    "det_line_degrees",
    "report",
]


@dataclass(frozen=True)
class KClass:
    """A (rank, degree) class carrying the Euler pairing."""

    rank: int
    degree: int

    def __post_init__(self):
        if self.rank < -1:
            raise DomainError(f"rank must be >= -1, got {self.rank}")

    def __add__(self, other):
        return KClass(self.rank + other.rank, self.degree + other.degree)

    def __sub__(self, other):
        return KClass(self.rank - other.rank, self.degree - other.degree)


def euler_form(v: KClass, w: KClass) -> int:
    """chi(v, w) = deg(w) rk(v) - deg(v) rk(w)."""
    return w.degree * v.rank - v.degree * w.rank


def _check_pair(n: int, k: int) -> None:
    if not isinstance(n, int) or not isinstance(k, int):
        raise DomainError(f"n and k must be integers, got {n!r}, {k!r}")
    if k <= 0:
        raise DomainError(f"k must be positive, got k={k}")
    if k >= n:
        raise DomainError(f"need k < n, got n={n}, k={k}")
    if gcd(n, k) != 1:
        raise DomainError(f"n={n} and k={k} are not coprime")


def negative_cf(n: int, k: int) -> list[int]:
    """Negative continued fraction of ``n/k`` via ceiling quotients.

    >>> negative_cf(27, 8)
    [4, 2, 3, 2]
    """
    _check_pair(n, k)
    out = []
    while k:
        a = -(-n // k)
        out.append(a)
        n, k = k, a * k - n
    return out


def eval_negative_cf(seq: Sequence[int]) -> Fraction:
    """Evaluate ``n_1 - 1/(n_2 - ...)`` from the innermost term outwards."""
    if not seq:
        raise DomainError("empty expansion")
    value = Fraction(seq[-1])
    for a in reversed(seq[:-1]):
        value = a - 1 / value
    return value


def tridiag_det(seq: Sequence[int]) -> int:
    """Determinant of the tridiagonal matrix with diagonal ``seq`` and -1 off it.

    Uses D(seq) = seq[-1] * D(seq[:-1]) - D(seq[:-2]), with D(()) = 1.
    """
    prev, cur = 0, 1
    for a in seq:
        prev, cur = cur, a * cur - prev
    return cur


@dataclass(frozen=True)
class ChainInvariants:
    n: int
    k: int
    expansion: tuple[int, ...]
    nconv: tuple[int, ...]
    kconv: tuple[int, ...]
    subranks: tuple[int, ...]
    subdegs: tuple[int, ...]
    slopes: tuple[Fraction, ...]

    @property
    def p(self) -> int:
        return len(self.expansion)

    def vectors(self) -> list[KClass]:
        """Classes v_0..v_{p+1} = (k(i), n(i)), closed off by v_{p+1} = (-1, 0)."""
        vs = [KClass(kk, nn) for kk, nn in zip(self.kconv, self.nconv)]
        vs.append(KClass(-1, 0))
        return vs

    def check(self) -> None:
        """Assert every structural identity; raises ``AssertionError`` on failure."""
        p, nc, kc = self.p, self.nconv, self.kconv
        e = self.expansion
        assert all(a >= 2 for a in e)
        assert eval_negative_cf(list(e)) == Fraction(self.n, self.k)
        assert nc[0] == self.n and kc[0] == self.k and nc[p] == 1 and kc[p] == 0
        for i in range(p):
            assert nc[i + 1] * kc[i] - nc[i] * kc[i + 1] == 1
            assert nc[i] > nc[i + 1] and kc[i] > kc[i + 1]
        for i in range(p - 1):
            # Laplace expansion along the last row
            nxt = nc[i + 2]
            knxt = kc[i + 2]
            assert nc[i] == e[p - i - 1] * nc[i + 1] - nxt
            assert kc[i] == e[p - i - 1] * kc[i + 1] - knxt
        s = self.slopes
        assert Fraction(self.n, self.k) > s[0]
        assert all(s[i] >= s[i + 1] for i in range(p))
        assert s[p] == 1
        assert all(r > 0 for r in self.subranks) and all(d > 0 for d in self.subdegs)


def _prefix_continuants(seq: Sequence[int]) -> list[int]:
    """[D(seq[:0]), D(seq[:1]), ..., D(seq)] in one pass."""
    out = [1]
    prev = 0
    for a in seq:
        out.append(a * out[-1] - prev)
        prev = out[-2]
    return out


def chain_invariants(n: int, k: int) -> ChainInvariants:
    e = negative_cf(n, k)
    p = len(e)
    full = _prefix_continuants(e)
    tail = _prefix_continuants(e[1:])
    nconv = [full[p - i] for i in range(p)] + [1]
    kconv = [tail[p - i - 1] for i in range(p)] + [0]
    # lowering the last diagonal entry by one subtracts the next shorter continuant
    subranks = [kconv[i] - kconv[i + 1] for i in range(p)] + [1]
    subdegs = [nconv[i] - nconv[i + 1] for i in range(p)] + [1]
    slopes = [Fraction(d, r) for d, r in zip(subdegs, subranks)]
    return ChainInvariants(
        n=n,
        k=k,
        expansion=tuple(e),
        nconv=tuple(nconv),
        kconv=tuple(kconv),
        subranks=tuple(subranks),
        subdegs=tuple(subdegs),
        slopes=tuple(slopes),
    )


@dataclass(frozen=True)
class PartitionBlocks:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = [i for b in self.blocks for i in b]
        if any(not b for b in self.blocks) or flat != list(range(len(flat))):
            raise DomainError(f"not a consecutive partition: {self.blocks}")
        for b in self.blocks:
            if list(b) != list(range(b[0], b[0] + len(b))):
                raise DomainError(f"block {b} is not a run")

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def as_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def _runs(joined: Sequence[bool]) -> PartitionBlocks:
    # joined[i] says whether i and i+1 share a block
    blocks, cur = [], [0]
    for i, j in enumerate(joined):
        if j:
            cur.append(i + 1)
        else:
            blocks.append(tuple(cur))
            cur = [i + 1]
    blocks.append(tuple(cur))
    return PartitionBlocks(tuple(blocks))


def tau_partition(expansion: Sequence[int]) -> PartitionBlocks:
    """Split {0..p} into runs, joining i and i+1 exactly when n_{i+1} == 2."""
    if any(a < 2 for a in expansion):
        raise DomainError(f"expansion entries must be >= 2: {list(expansion)}")
    return _runs([a == 2 for a in expansion])


def slope_classes(inv: ChainInvariants) -> PartitionBlocks:
    """Maximal runs of equal consecutive slopes s(0..p)."""
    s = inv.slopes
    return _runs([s[i] == s[i + 1] for i in range(len(s) - 1)])


def dim_end(n: int, k: int) -> int:
    """p + 1 + sum over i < j of d(i) r(j) - d(j) r(i); always equals n."""
    inv = chain_invariants(n, k)
    r, d = inv.subranks, inv.subdegs
    total = inv.p + 1
    for i in range(inv.p + 1):
        for j in range(i + 1, inv.p + 1):
            total += d[i] * r[j] - d[j] * r[i]
    return total


@dataclass(frozen=True)
class ImageDescriptor:
    block_sizes: tuple[int, ...]
    ambient_power: int
    fiber_dimension: int

    @property
    def quotient_label(self) -> str:
        sizes = ",".join(str(s) for s in self.block_sizes)
        return (
            f"X^{self.ambient_power}/S^tau_{self.ambient_power} (blocks {sizes}), "
            f"fiber of addition map, dim {self.fiber_dimension}"
        )


def image_descriptor(n: int, k: int) -> ImageDescriptor:
    e = negative_cf(n, k)
    sizes = tuple(sorted(tau_partition(e).sizes))
    return ImageDescriptor(sizes, len(e) + 1, len(e))


def lambda_degrees(inv: ChainInvariants) -> list[int]:
    """chi(v_{j-1}, v_{j+1}) for j = 1..p; these reproduce n_p, ..., n_1."""
    vs = inv.vectors()
    out = [euler_form(vs[j - 1], vs[j + 1]) for j in range(1, inv.p + 1)]
    if out != list(reversed(inv.expansion)):
        raise AssertionError(f"Euler form degrees {out} disagree with reversed expansion")
    return out


def det_line_degrees(n: int, k: int) -> list[int]:
    """Degrees of the line bundles L_1..L_p on the product of moduli factors.

    For p == 1 this is ``[n]``. Otherwise endpoints get +1 and interior
    factors +2 on top of the Euler-form degrees.
    """
    inv = chain_invariants(n, k)
    lam = lambda_degrees(inv)
    p = inv.p
    if p == 1:
        return [lam[0]]
    return [lam[j - 1] + (1 if j in (1, p) else 2) for j in range(1, p + 1)]


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


NOTES = (
    "lambdaDegrees[j-1] = chi(v_{j-1}, v_{j+1}) with v_i = (k(i), n(i)), v_{p+1} = (-1, 0); "
    "this equals the expansion read backwards (n_p, ..., n_1)",
    "detLineDegrees adds +1 at j = 1 and j = p and +2 in between; for p = 1 the single degree is n",
    "tauBlocks joins i, i+1 when n_{i+1} = 2; slopeBlocks joins equal consecutive slopes; "
    "slopeBlocks equals tauBlocks of the reversed expansion, so block sizes agree",
)


def report(n: int, k: int) -> dict:
    """The full JSON-ready arithmetic report for ``(n, k)``."""
    inv = chain_invariants(n, k)
    inv.check()
    tau = tau_partition(inv.expansion)
    slope = slope_classes(inv)
    if Counter(tau.sizes) != Counter(slope.sizes):
        raise AssertionError("tau and slope partitions have different block sizes")
    return {
        "n": n,
        "k": k,
        "expansion": list(inv.expansion),
        "nconv": list(inv.nconv),
        "kconv": list(inv.kconv),
        "subranks": list(inv.subranks),
        "subdegs": list(inv.subdegs),
        "slopes": [_frac_str(s) for s in inv.slopes],
        "tauBlocks": tau.as_lists(),
        "slopeBlocks": slope.as_lists(),
        "dimEnd": dim_end(n, k),
        "detLineDegrees": det_line_degrees(n, k),
        "lambdaDegrees": lambda_degrees(inv),
        "notes": list(NOTES),
    }
