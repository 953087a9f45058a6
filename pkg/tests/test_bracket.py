import math
from itertools import combinations

import numpy as np
import pytest

from foboson.bracket import (
    BosonChart,
    all_jacobiators,
    bracket_derivatives,
    bracket_derivatives_fd,
    bracket_matrix,
    coordinate_order,
    jacobiator,
    jacobiator_fd,
    jacobiator_scale,
    lattice_invariance_check,
    log_theta_gradient,
    prime_bracket_check,
    random_chart,
)
from foboson.elliptic import EllipticContext, cyclic_coeff, theta, zeta
from foboson.errors import DomainError


@pytest.fixture
def ctx():
    return EllipticContext(1j)


def chart_of(points, values=None):
    points = np.asarray(points, dtype=complex)
    if values is None:
        values = np.ones_like(points)
    return BosonChart(points, values)


def test_chart_validation(ctx):
    with pytest.raises(DomainError):
        chart_of([0.1])
    with pytest.raises(DomainError):
        chart_of([0.1, 0.2], [1, 0])
    with pytest.raises(DomainError):
        bracket_matrix(chart_of([0.1, 1.1 + 1j]), ctx)  # same point on the curve


def test_chart_json_roundtrip(ctx, rng):
    chart, _ = random_chart(4, ctx, rng)
    back, tau = BosonChart.from_json(chart.to_json(ctx.tau))
    assert tau == ctx.tau
    assert np.array_equal(back.points, chart.points) and np.array_equal(back.values, chart.values)


def test_n2_matrix(ctx):
    P = bracket_matrix(chart_of([0.1, 0.5 + 0.3j]), ctx)
    assert P.order == ("u1", "u2", "v2")
    assert np.array_equal(P.entries, np.array([[0, 0, 1], [0, 0, -1], [-1, 1, 0]], dtype=complex))


def test_n3_vv_entry_is_cyclic_coefficient(ctx):
    u = np.array([0.1 + 0.2j, 0.45 - 0.1j, -0.3 + 0.35j])
    P = bracket_matrix(chart_of(u), ctx)
    expect = 2 * (zeta(u[0] - u[2], ctx) + zeta(u[2] - u[1], ctx) + zeta(u[1] - u[0], ctx))
    assert abs(P["v2", "v3"] - expect) < 1e-13
    assert abs(P["v2", "v3"] - cyclic_coeff(u[0] - u[2], u[2] - u[1], u[1] - u[0], ctx)) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 5])
def test_matrix_structure(n, ctx, rng):
    chart, _ = random_chart(n, ctx, rng)
    E = bracket_matrix(chart, ctx).entries
    assert np.abs(E + E.T).max() < 1e-12
    assert np.all(E[:n, :n] == 0)
    vu = E[n:, :n]
    assert np.all(vu == np.round(vu.real)) and set(np.unique(vu.real)) <= {-1.0, 0.0, 1.0}
    for j in range(2, n + 1):
        for k in range(1, n + 1):
            assert E[n + j - 2, k - 1] == (j == k) - (k == 1)


def test_translation_invariance(ctx, rng):
    chart, _ = random_chart(4, ctx, rng)
    P0 = bracket_matrix(chart, ctx).entries
    P1 = bracket_matrix(chart_of(chart.points + (0.37 - 0.21j)), ctx).entries
    assert np.abs(P1 - P0).max() < 1e-10


def test_base_point_relabeling(ctx, rng):
    # {v_j - v_k, .} is the bracket of log(y_j/y_k): recovers the (i, j, k) formula with base k
    chart, _ = random_chart(4, ctx, rng)
    P = bracket_matrix(chart, ctx)
    u = chart.points
    # log(y_3/y_2) and log(y_4/y_2)
    lhs = P["v3", "v4"] - P["v3", "v2"] - P["v2", "v4"]
    rhs = 2 * (zeta(u[1] - u[3], ctx) + zeta(u[3] - u[2], ctx) + zeta(u[2] - u[1], ctx))
    assert abs(lhs - rhs) < 1e-10
    for k in range(1, 5):
        val = P["v3", f"u{k}"] - P["v2", f"u{k}"]
        assert val == (k == 3) - (k == 2)


def test_derivatives_against_finite_differences(rng):
    ctx = EllipticContext(0.3 + 1.1j)
    chart, _ = random_chart(5, ctx, rng)
    D = bracket_derivatives(chart, ctx)
    F = bracket_derivatives_fd(chart, ctx, 1e-4)
    scale = max(1, np.abs(D).max())
    assert np.abs(D - F).max() < 1e-5 * scale
    with pytest.raises(DomainError):
        bracket_derivatives_fd(chart, ctx, 1e-2)


def test_jacobiator_examples(ctx, rng):
    chart, _ = random_chart(4, ctx, rng)
    assert jacobiator(chart, ("u1", "u2", "u3"), ctx) == 0
    assert abs(jacobiator(chart, ("v2", "v3", "u1"), ctx)) < 1e-10
    scale = jacobiator_scale(chart, ctx)
    assert abs(jacobiator(chart, ("v2", "v3", "v4"), ctx)) < 1e-8 * scale
    with pytest.raises(DomainError):
        jacobiator(chart, ("v2", "v2", "u1"), ctx)
    with pytest.raises(DomainError):
        jacobiator(chart, ("v2", "v9", "u1"), ctx)


def test_jacobiator_fd_examples(ctx, rng):
    chart, _ = random_chart(4, ctx, rng)
    assert jacobiator_fd(chart, ("u1", "u2", "u4"), ctx, 1e-4) == 0
    h = 1e-4
    for triple in [("v2", "v3", "v4"), ("v2", "u3", "v4"), (0, 4, 6)]:
        assert abs(jacobiator_fd(chart, triple, ctx, h) - jacobiator(chart, triple, ctx)) < 10 * h**2
    two, _ = random_chart(2, ctx, rng)
    assert all(v == 0 for v in all_jacobiators(two, ctx, step=1e-4).values())


def test_jacobiator_detects_a_non_poisson_bivector(ctx, rng):
    # control: {v2, v3} += c * u4 adds -c to J(v2, v3, v4)
    from foboson.bracket import _jacobi

    chart, _ = random_chart(4, ctx, rng)
    P = bracket_matrix(chart, ctx).entries.copy()
    D = bracket_derivatives(chart, ctx)
    c = 0.5
    P[4, 5] += c * chart.points[3]
    P[5, 4] = -P[4, 5]
    D[4, 5, 3] += c
    D[5, 4, 3] -= c
    assert abs(_jacobi(P, D, 4, 5, 6) + c) < 1e-10


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j])
def test_prime_bracket_n3(tau, rng):
    ctx = EllipticContext(tau)
    chart, _ = random_chart(3, ctx, rng)
    rep = prime_bracket_check(chart, ctx)
    assert rep["pass"] and rep["maxResidual"] < 1e-9
    shifted = prime_bracket_check(chart.shifted(1, 1.0), ctx)
    assert abs(shifted["maxResidual"] - rep["maxResidual"]) < 1e-9


def test_prime_bracket_n2(ctx, rng):
    chart, _ = random_chart(2, ctx, rng)
    rep = prime_bracket_check(chart, ctx)
    assert rep["vvResidual"] == 0 and rep["vuResidual"] == 0


def test_log_theta_gradient_matches_finite_differences(rng):
    ctx = EllipticContext(0.3 + 1.1j)
    chart, _ = random_chart(4, ctx, rng)
    u, n, h = chart.points, chart.n, 1e-5

    def f(points):
        # product form of y'_j / y'_1 without the y factor
        out = []
        for j in range(1, n):
            num = np.prod([theta(points[m] - points[j], ctx) for m in range(n) if m != j])
            den = np.prod([theta(points[m] - points[0], ctx) for m in range(n) if m != 0])
            out.append(num / den)
        return np.array(out)

    G = log_theta_gradient(chart, ctx)
    base = f(u)
    for m in range(n):
        up, dn = u.copy(), u.copy()
        up[m] += h
        dn[m] -= h
        fd = (f(up) - f(dn)) / (2 * h) / base
        assert np.abs(fd - G[:, m]).max() < 1e-6 * max(1, np.abs(G).max())


def test_prime_bracket_sign_matters(ctx, rng):
    # control: dividing by the theta products instead of multiplying leaves a nonzero bracket
    chart, _ = random_chart(4, ctx, rng)
    n = chart.n
    P = bracket_matrix(chart, ctx).entries
    T = np.eye(2 * n - 1, dtype=complex)
    T[n:, :n] = -log_theta_gradient(chart, ctx)
    assert np.abs((T @ P @ T.T)[n:, n:]).max() > 1e-3


def test_lattice_invariance(ctx, rng):
    chart, _ = random_chart(4, ctx, rng)
    assert lattice_invariance_check(chart, ctx, shifts=(1.0,))["maxResidual"] < 1e-10
    assert lattice_invariance_check(chart, ctx, shifts=(ctx.tau,))["maxResidual"] < 1e-9
    assert lattice_invariance_check(chart, ctx, shifts=(0.0,))["maxResidual"] == 0
    rep = lattice_invariance_check(chart, ctx)
    assert set(rep) >= {"maxResidual", "tolerance", "pass"} and rep["pass"]


def test_random_chart_reproducible(ctx):
    a, ra = random_chart(5, ctx, np.random.default_rng(3))
    b, rb = random_chart(5, ctx, np.random.default_rng(3))
    assert np.array_equal(a.points, b.points) and ra == rb


def test_random_chart_rejection_counted():
    ctx = EllipticContext(1j, min_separation=0.3)
    chart, rejected = random_chart(4, ctx, np.random.default_rng(0))
    assert chart.separation(ctx.tau) >= 0.3
    assert rejected > 0


def test_coordinate_order():
    assert coordinate_order(3) == ["u1", "u2", "u3", "v2", "v3"]
    assert math.comb(len(coordinate_order(6)), 3) == 165
