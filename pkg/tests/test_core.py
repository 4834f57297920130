"""Core module: grids, quadrature, energies, H1 x L2 norms."""

import numpy as np
import pytest
from scipy.integrate import quad

from sgdelta.core import (
    ImpurityParams,
    deviation_norm,
    energy,
    h1_l2_norm,
    make_grid,
    make_state,
    sin_seminorms,
    zero_state,
)
from sgdelta.errors import GridError, GridMismatchError
from sgdelta.waves import ground_state, kink_profile


def test_make_grid_arithmetic():
    g = make_grid(20.0, 4001)
    assert g.spacing == pytest.approx(0.01)
    assert g.zero_index == 2000
    assert g.x[2000] == 0.0  # exactly
    assert np.all(np.diff(g.x) > 0)


def test_make_grid_three_nodes():
    g = make_grid(10.0, 3)
    assert np.allclose(g.x, [-10.0, 0.0, 10.0])


@pytest.mark.parametrize("n", [4000, 2, 1, -5])
def test_make_grid_rejects_even_or_tiny(n):
    with pytest.raises(GridError):
        make_grid(20.0, n)


def test_trapezoid_weights_sum_to_length():
    g = make_grid(20.0, 4001)
    assert g.weights.sum() == pytest.approx(40.0, abs=1e-12)


def test_deviation_norm_zero_for_identical_states():
    g = make_grid(20.0, 801)
    s = kink_profile(g)
    d = deviation_norm(s, s)
    assert d.total == 0.0


def test_deviation_norm_constant_velocity_offset():
    # u2-difference == 0.1 on [-20, 20]: l2 = 0.1*sqrt(40); trapezoid is
    # exact for constants.
    g = make_grid(20.0, 4001)
    a = zero_state(g)
    b = make_state(g, np.zeros(g.node_count), np.full(g.node_count, 0.1))
    d = deviation_norm(b, a)
    assert d.l2_part == pytest.approx(0.1 * np.sqrt(40.0), rel=1e-12)
    assert d.h1_part == 0.0
    assert d.total == d.l2_part


def test_deviation_norm_gaussian_h1_oracle():
    # Oracle: int e^{-2x^2} (1 + 4x^2) dx = 2*sqrt(pi/2), evaluated both in
    # closed form and by adaptive quadrature.
    closed = 2.0 * np.sqrt(np.pi / 2.0)
    numeric, err = quad(lambda x: np.exp(-2 * x * x) * (1 + 4 * x * x), -np.inf, np.inf)
    assert numeric == pytest.approx(closed, abs=1e-10)

    # sqrt(2*sqrt(pi/2)) = 1.5832335; the discrete value carries the O(dx^2)
    # centered-difference bias, about -4e-5 at dx = 0.01.
    g = make_grid(20.0, 4001)
    v1 = np.exp(-g.x**2)
    d = h1_l2_norm(g, v1, np.zeros(g.node_count))
    assert d.h1_part == pytest.approx(np.sqrt(closed), abs=1e-4)
    assert d.l2_part == 0.0


def test_deviation_norm_grid_mismatch():
    a = zero_state(make_grid(20.0, 401))
    b = zero_state(make_grid(20.0, 403))
    with pytest.raises(GridMismatchError):
        deviation_norm(a, b)


def test_norm_homogeneity_and_triangle():
    g = make_grid(10.0, 501)
    rng = np.random.default_rng(7)
    for _ in range(20):
        v1, v2 = rng.standard_normal((2, g.node_count))
        w1, w2 = rng.standard_normal((2, g.node_count))
        c = rng.uniform(-3, 3)
        n_v = h1_l2_norm(g, v1, v2)
        n_cv = h1_l2_norm(g, c * v1, c * v2)
        assert n_cv.total == pytest.approx(abs(c) * n_v.total, rel=1e-12)
        n_w = h1_l2_norm(g, w1, w2)
        n_vw = h1_l2_norm(g, v1 + w1, v2 + w2)
        assert n_vw.total <= n_v.total + n_w.total + 1e-12


def test_energy_zero_state():
    g = make_grid(20.0, 2001)
    e = energy(zero_state(g), ImpurityParams(q=3.0))
    assert e.total == 0.0


def test_energy_additivity_bit_exact():
    g = make_grid(20.0, 2001)
    s = ground_state(g, -4.0)
    e = energy(s, ImpurityParams(q=-4.0))
    assert e.total == e.kinetic + e.gradient + e.potential + e.delta_term
    assert e.kinetic >= 0 and e.gradient >= 0 and e.potential >= 0
    assert abs(e.delta_term) <= 2.0 * 4.0


def test_kink_energy_bogomolny():
    # Bogomolny: u_x^2/2 = 1 - cos(u) along the kink, so the free part
    # integrates to int 4 sech^2 = 8 and E(K, 0) = 8 + 2q.
    weight, err = quad(lambda x: 4.0 / np.cosh(x) ** 2, -40, 40)
    assert weight == pytest.approx(8.0, abs=1e-10)
    g = make_grid(20.0, 80001)
    k = kink_profile(g)
    for q in (-1.0, 1.0):
        e = energy(k, ImpurityParams(q=q))
        assert e.total == pytest.approx(8.0 + 2.0 * q, abs=1e-6)


def test_ground_state_energy_q_minus_4():
    # Half-line Bogomolny gives the free part 4(1 - tanh x0) per side with
    # tanh x0 = -2/q = 1/2, so 4 total; the impurity term is
    # -4*(1 - cos(2*pi/3)) = -6; E(Q,0) = -2.
    g = make_grid(20.0, 80001)
    s = ground_state(g, -4.0)
    e = energy(s, ImpurityParams(q=-4.0))
    assert e.total == pytest.approx(-2.0, abs=1e-6)


def test_sharp_mollified_energy_consistency():
    # For a fixed smooth state, |E_eps - E| shrinks monotonically with eps.
    g = make_grid(20.0, 4001)
    s = make_state(g, 1.3 * np.exp(-g.x**2), np.zeros(g.node_count))
    sharp = energy(s, ImpurityParams(q=-4.0)).total
    gaps = []
    for eps in (0.4, 0.2, 0.1):
        e = energy(s, ImpurityParams(q=-4.0, delta_mode="mollified", eps=eps)).total
        gaps.append(abs(e - sharp))
    assert gaps[0] > gaps[1] > gaps[2]
    # gap scale is |q*sin(u(0))| * m2 * eps^2 with m2 ~ 0.146 the bump's
    # second moment: ~8e-3 at eps = 0.1
    assert gaps[2] < 2e-2


def test_gagliardo_inequality_discrete():
    # 2*max|f|^2 <= a*||f||_2^2 + (1/a)*||f_x||_2^2 + tol on a test corpus,
    # with tol = 10*dx*||f||_{H1}^2 absorbing the sampling error.
    g = make_grid(20.0, 4001)
    rng = np.random.default_rng(0)
    corpus = [
        np.exp(-g.x**2),
        np.exp(-0.25 * (g.x - 3.0) ** 2),
        1.0 / np.cosh(g.x),
        2.0 / np.cosh(0.5 * g.x),
    ]
    for _ in range(4):
        coeff = rng.standard_normal(16)
        modes = np.arange(1, 17)
        f = (coeff[None, :] * np.sin(
            np.pi * modes[None, :] * (g.x[:, None] + 20.0) / 40.0
        )).sum(axis=1)
        corpus.append(f)
    from sgdelta.core import grad_sq_integral

    for f in corpus:
        l2sq = g.integrate(f**2)
        gradsq = grad_sq_integral(g, f)
        tol = 10.0 * g.spacing * (l2sq + gradsq)
        for a in (0.5, 1.0, 2.0):
            lhs = 2.0 * np.max(np.abs(f)) ** 2
            assert lhs <= a * l2sq + gradsq / a + tol


def test_sin_seminorms_on_kink():
    # ||sin(K/2)||^2 = int sech^2 = 2 and ||K_x||^2 = 8.
    g = make_grid(20.0, 8001)
    grad, half = sin_seminorms(kink_profile(g))
    assert grad**2 == pytest.approx(8.0, rel=1e-4)
    assert half**2 == pytest.approx(2.0, rel=1e-6)
