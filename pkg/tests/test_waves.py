"""Waves module: closed forms, matching equation, gluing condition."""

import numpy as np
import pytest
from scipy.optimize import brentq

from sgdelta.core import make_grid
from sgdelta.errors import CouplingError, NoH1WaveError, SubluminalError
from sgdelta.waves import (
    boosted_kink_state,
    gluing_residual,
    ground_state,
    ground_state_slopes,
    kink_profile,
    matching_root,
    reflected,
    shifted_by_2pi,
)

GRID = make_grid(20.0, 4001)


def node_value(state, x):
    i = int(round((x + 20.0) / state.grid.spacing))
    assert state.grid.x[i] == pytest.approx(x, abs=1e-12)
    return state.u1[i]


def test_kink_center_value():
    k = kink_profile(GRID)
    assert node_value(k, 0.0) == pytest.approx(np.pi, rel=1e-14)
    assert np.all(np.diff(k.u1) > 0)
    assert k.u1[0] < 1e-8 and abs(k.u1[-1] - 2 * np.pi) < 1e-8


def test_kink_translation_covariance():
    k = kink_profile(GRID, x0=1.0)
    assert node_value(k, 1.0) == pytest.approx(np.pi, rel=1e-14)


def test_kink_tail_asymptotics():
    # 4*arctan(e^10) = 2*pi - 4*arctan(e^-10) ~ 2*pi - 4e-10 ~ 6.283004
    k = kink_profile(GRID)
    expected = 2 * np.pi - 4 * np.arctan(np.exp(-10.0))
    assert node_value(k, 10.0) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(6.28300, abs=5e-6)


def test_boosted_kink_at_rest_is_kink():
    b = boosted_kink_state(GRID, v=0.0, x0=0.0, t=3.7)
    k = kink_profile(GRID)
    assert np.allclose(b.u1, k.u1, atol=1e-14)
    assert np.all(b.u2 == 0.0)


def test_boosted_kink_chain_rule():
    # u2(0) = -2*v/sqrt(1-v^2) at the center: K_x(0) = 2.
    b = boosted_kink_state(GRID, v=0.6, x0=0.0, t=0.0)
    assert node_value(b, 0.0) == pytest.approx(np.pi)
    i = b.grid.zero_index
    assert b.u2[i] == pytest.approx(-1.5, rel=1e-12)


def test_boosted_kink_traveling_sample():
    # At time t the profile is the initial one shifted by v*t.
    v, t = 0.25, 8.0
    b = boosted_kink_state(GRID, v=v, t=t)
    ref = boosted_kink_state(GRID, v=v, t=0.0, x0=v * t)
    assert np.allclose(b.u1, ref.u1, atol=1e-12)
    assert np.allclose(b.u2, ref.u2, atol=1e-12)


@pytest.mark.parametrize("v", [1.0, -1.0, 1.2])
def test_boosted_kink_rejects_superluminal(v):
    with pytest.raises(SubluminalError):
        boosted_kink_state(GRID, v=v)


def test_matching_root_closed_forms():
    assert matching_root(-4.0).y == pytest.approx(1.0 / np.sqrt(3.0), rel=1e-12)
    assert matching_root(6.0).y == pytest.approx(np.sqrt(2.0), rel=1e-12)
    assert not matching_root(2.0).exists
    assert not matching_root(-2.0).exists
    with pytest.raises(CouplingError):
        matching_root(0.0)


@pytest.mark.parametrize("q", [-10.0, -4.0, -3.0, -2.1, 2.1, 3.0, 4.0, 10.0])
def test_matching_root_against_bisection(q):
    # Independent root of (1-y^2)/(1+y^2) + 2/q = 0 on y > 0.
    f = lambda y: (1.0 - y * y) / (1.0 + y * y) + 2.0 / q
    y_bisect = brentq(f, 1e-12, 1e12, xtol=1e-14, rtol=1e-14)
    root = matching_root(q)
    assert root.exists
    assert root.y == pytest.approx(y_bisect, rel=1e-10)
    assert abs((1 - root.y**2) / (1 + root.y**2) + 2.0 / q) < 1e-12


def test_ground_state_center_values():
    s = ground_state(GRID, -4.0)
    assert node_value(s, 0.0) == pytest.approx(2 * np.pi / 3, rel=1e-12)
    s = ground_state(GRID, 6.0)
    assert node_value(s, 0.0) == pytest.approx(4 * np.arctan(np.sqrt(2.0)), rel=1e-12)
    assert node_value(s, 0.0) == pytest.approx(3.8212665, abs=1e-6)


def test_ground_state_even_and_decaying():
    s = ground_state(GRID, -4.0)
    assert np.array_equal(s.u1, s.u1[::-1])
    assert abs(s.u1[0]) < 1e-6 and abs(s.u1[-1]) < 1e-6


@pytest.mark.parametrize("q", [-2.0, -1.0, 0.5, 2.0, 1.0])
def test_ground_state_rejects_small_coupling(q):
    with pytest.raises(NoH1WaveError):
        ground_state(GRID, q)


def test_gluing_residual_ground_state_exact_path():
    # Q_x(0-) = 2y(q-2)/q = sqrt(3) at q = -4; jump = -2*sqrt(3) matches
    # q*sin(2*pi/3) = -4*(sqrt(3)/2).
    q = -4.0
    s = ground_state(GRID, q)
    left, right = ground_state_slopes(q)
    assert left == pytest.approx(np.sqrt(3.0), rel=1e-12)
    assert right == pytest.approx(-np.sqrt(3.0), rel=1e-12)
    assert abs(gluing_residual(s, q, slopes=(left, right))) < 1e-12


@pytest.mark.parametrize("q", [-10.0, -4.0, -2.1, 2.1, 3.0, 6.0, 10.0])
def test_gluing_residual_ground_state_both_paths(q):
    s = ground_state(GRID, q)
    assert abs(gluing_residual(s, q, slopes=ground_state_slopes(q))) < 1e-10
    fd = gluing_residual(s, q)
    assert abs(fd) < 5.0 * GRID.spacing**2 * max(1.0, abs(q))


def test_gluing_residual_centered_kink():
    # sin(K(0)) = sin(pi) = 0 and K is smooth: residual vanishes at the
    # stencil order for every coupling.
    k = kink_profile(GRID)
    for q in (-4.0, -1.0, 0.5, 3.0):
        assert abs(gluing_residual(k, q)) < 5.0 * GRID.spacing**2


def test_gluing_residual_shifted_kink_value():
    # Direct-evaluation oracle: the kink is smooth so r = -q*sin(u(0)) with
    # u(0) = 4*arctan(e^{-x0}); at x0 = 0.5, q = -4 this is
    # 4*sin(4*arctan(e^{-1/2})) = +3.27851 (the mirror shift gives -3.27851).
    q = -4.0
    expected = -q * np.sin(4.0 * np.arctan(np.exp(-0.5)))
    assert expected == pytest.approx(3.2785138, abs=1e-6)
    r = gluing_residual(kink_profile(GRID, x0=0.5), q)
    assert r == pytest.approx(expected, abs=1e-3)
    r_mirror = gluing_residual(kink_profile(GRID, x0=-0.5), q)
    assert r_mirror == pytest.approx(-expected, abs=1e-3)


@pytest.mark.parametrize("q", [-4.0, -1.0, 1.0, 4.0])
def test_shifted_kink_residual_has_unique_zero(q):
    # Sign-change scan on x0 in [-3, 3]: the centered kink is the only
    # degree-1 stationary profile.
    shifts = np.linspace(-3.0, 3.0, 121)
    r = np.array([gluing_residual(kink_profile(GRID, x0=s), q) for s in shifts])
    signs = np.sign(r)
    changes = np.nonzero(np.diff(signs) != 0)[0]
    assert len(changes) == 1
    crossing = shifts[changes[0]]
    assert abs(crossing) <= 0.06


def test_symmetry_helpers():
    s = ground_state(GRID, -4.0)
    assert np.allclose(reflected(s).u1, s.u1)
    shifted = shifted_by_2pi(s, -1)
    assert shifted.u1[GRID.zero_index] == pytest.approx(2 * np.pi / 3 - 2 * np.pi)
