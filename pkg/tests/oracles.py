"""Reference implementations kept independent of the package code paths."""
from fractions import Fraction

import mpmath


def cofactor_det(rows):
    """Laplace expansion along the first row; exponential but exact."""
    size = len(rows)
    if size == 0:
        return 1
    if size == 1:
        return rows[0][0]
    total = 0
    for j in range(size):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def tridiagonal(seq):
    size = len(seq)
    return [[seq[i] if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(size)] for i in range(size)]


def convergents_forward(expansion):
    """Continuants of n_1 - 1/(n_2 - ...) by the forward three-term recurrence.

    Returns numerators/denominators of n_1, n_1 - 1/n_2, ... (shortest first).
    """
    nums, dens = [], []
    p_prev, p = 1, expansion[0]
    q_prev, q = 0, 1
    nums.append(p)
    dens.append(q)
    for a in expansion[1:]:
        p_prev, p = p, a * p - p_prev
        q_prev, q = q, a * q - q_prev
        nums.append(p)
        dens.append(q)
    return nums, dens


def matmul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][t] * B[t][j] for t in range(inner)), Fraction(0)) for j in range(cols)] for i in range(rows)]


def matsub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def to_lists(M):
    return [[Fraction(x) for x in row] for row in M]


def theta_mp(z, tau, dps=30):
    """Odd theta via mpmath: th(z) = jtheta(1, pi z, exp(i pi tau))."""
    with mpmath.workdps(dps):
        q = mpmath.exp(1j * mpmath.pi * tau)
        return complex(mpmath.jtheta(1, mpmath.pi * z, q))


def zeta_mp(z, tau, dps=30):
    with mpmath.workdps(dps):
        q = mpmath.exp(1j * mpmath.pi * tau)
        x = mpmath.pi * z
        return complex(mpmath.pi * mpmath.jtheta(1, x, q, 1) / mpmath.jtheta(1, x, q))


def zeta_d1_mp(z, tau, dps=30):
    with mpmath.workdps(dps):
        q = mpmath.exp(1j * mpmath.pi * tau)
        x = mpmath.pi * z
        t0 = mpmath.jtheta(1, x, q)
        t1 = mpmath.jtheta(1, x, q, 1)
        t2 = mpmath.jtheta(1, x, q, 2)
        return complex(mpmath.pi**2 * (t2 / t0 - (t1 / t0) ** 2))
