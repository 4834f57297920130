"""Experiments module: trials, sweeps, minimization, mollifier studies."""

import numpy as np
import pytest

from sgdelta.core import make_grid, make_state, zero_state
from sgdelta.errors import ConvergenceError, PhysicsError
from sgdelta.experiments import (
    band_limited_noise,
    instability_trial,
    kink_center,
    minimize_energy,
    mollified_convergence,
    run_jobs,
    scattering_sweep,
    stability_trial,
)
from sgdelta.waves import ground_state, kink_profile

GRID = make_grid(20.0, 4001)


def test_band_limited_noise_seeded_and_clamped():
    a = band_limited_noise(GRID, np.random.default_rng(5))
    b = band_limited_noise(GRID, np.random.default_rng(5))
    c = band_limited_noise(GRID, np.random.default_rng(6))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert abs(a[0]) < 1e-12 and abs(a[-1]) < 1e-12


def test_run_jobs_preserves_order():
    jobs = [lambda k=k: k * k for k in range(8)]
    assert run_jobs(jobs, threads=1) == [k * k for k in range(8)]
    assert run_jobs(jobs, threads=4) == [k * k for k in range(8)]


def test_stability_trial_zero_amplitude_stays_put():
    rep = stability_trial(kink_profile(GRID), -1.0, [0.0], 5.0, wave_kind="kink")
    assert rep.sup_deviations == (0.0,)
    assert rep.verdict == "stable-at-horizon"


def test_stability_trial_stable_kink_short():
    rep = stability_trial(
        kink_profile(GRID), -1.0, [1e-3, 1e-2], 20.0, wave_kind="kink", seed=1
    )
    assert rep.amplitudes == (1e-3, 1e-2)
    assert all(r <= rep.c_max for r in rep.ratios)
    assert not rep.escaped
    assert rep.verdict == "stable-at-horizon"


def test_stability_trial_rejects_bad_amplitudes():
    with pytest.raises(PhysicsError):
        stability_trial(kink_profile(GRID), -1.0, [1e-2, 1e-3], 5.0)


def test_instability_trial_matches_spectral_rate():
    rep = instability_trial(kink_profile(GRID), 1.0, 1e-4, 15.0, wave_kind="kink")
    assert rep.growth_detected
    assert rep.predicted_sigma == pytest.approx(0.8002, abs=2e-3)
    assert rep.relative_mismatch < 0.10
    assert rep.escape_time is not None and rep.escape_time < 15.0


def test_instability_trial_needs_positive_sigma():
    with pytest.raises(PhysicsError):
        instability_trial(kink_profile(GRID), -1.0, 1e-4, 10.0)


def test_instability_trial_zero_seed_degenerate():
    rep = instability_trial(kink_profile(GRID), 1.0, 0.0, 5.0)
    assert not rep.growth_detected
    assert rep.fitted_rate == 0.0
    assert rep.escape_time is None


def test_kink_center_tracking():
    k = kink_profile(GRID, x0=2.3)
    assert kink_center(k) == pytest.approx(2.3, abs=1e-3)


def test_scattering_free_kink_transmits_exactly():
    (out,) = scattering_sweep(0.0, [0.5], GRID)
    assert out.outcome == "transmit"
    assert out.mean_velocity == pytest.approx(0.5, abs=1e-2)
    assert out.energy_drift < 1e-3


def test_scattering_capture_and_transmit_attractive_impurity():
    slow, fast = scattering_sweep(-0.5, [0.05, 0.8], GRID)
    assert slow.outcome == "capture"
    assert abs(slow.final_center) < 5.0
    assert fast.outcome == "transmit"
    assert slow.energy_drift < 1e-3 and fast.energy_drift < 1e-3


def test_scattering_rejects_bad_speeds():
    with pytest.raises(PhysicsError):
        scattering_sweep(-0.5, [1.2], GRID)


def test_minimize_small_coupling_free_sector_goes_to_zero():
    g = make_grid(20.0, 2001)
    rng = np.random.default_rng(2)
    init = make_state(g, 0.05 * band_limited_noise(g, rng), np.zeros(g.node_count))
    rep = minimize_energy(-1.0, "free", init)
    assert rep.converged
    assert rep.nearest_wave == "zero"
    assert abs(rep.final_energy) <= 1e-6
    diffs = np.diff(rep.energy_series)
    assert np.all(diffs <= 1e-12)


def test_minimize_strong_coupling_free_sector_finds_pinned_wave():
    g = make_grid(20.0, 2001)
    init = make_state(g, 0.9 * ground_state(g, -4.0).u1, np.zeros(g.node_count))
    rep = minimize_energy(-4.0, "free", init)
    assert rep.converged
    assert rep.nearest_wave == "ground_state"
    assert rep.final_energy == pytest.approx(-2.0, abs=5e-4)  # O(dx^2) at dx=0.02
    assert rep.residual_interior <= 1e-6
    assert rep.residual_interface <= 1e-6


def test_minimize_degree1_sector_recenters_kink():
    g = make_grid(20.0, 2001)
    rep = minimize_energy(-1.0, "degree1", kink_profile(g, x0=1.0))
    assert rep.converged
    assert rep.nearest_wave == "kink"
    assert rep.final_energy == pytest.approx(6.0, abs=5e-4)
    assert rep.distance < 1e-2


def test_minimize_budget_exhaustion():
    g = make_grid(20.0, 2001)
    rng = np.random.default_rng(4)
    init = make_state(g, 0.5 * band_limited_noise(g, rng), np.zeros(g.node_count))
    with pytest.raises(ConvergenceError):
        minimize_energy(-1.0, "free", init, step_budget=3)


def test_mollified_convergence_monotone_sqrt_rate():
    # The H1 x L2 gap between sharp and mollified(eps) runs shrinks
    # monotonically; the measured order is ~0.5 (the equilibria differ by
    # O(sqrt(eps)) in H1: an O(1) slope mismatch lives on a set of
    # measure eps), factor ~sqrt(2) per halving.
    res = mollified_convergence(
        ground_state(GRID, -4.0), -4.0, [0.4, 0.2, 0.1], 5.0
    )
    d = res.deviations
    assert d[0] > d[1] > d[2] > 0
    for o in res.orders:
        assert 0.3 < o < 0.8


def test_mollified_convergence_vacuum_datum_trivial():
    res = mollified_convergence(zero_state(GRID), -4.0, [0.4, 0.2], 2.0)
    assert all(d == 0.0 for d in res.deviations)


def test_mollified_convergence_rejects_increasing_eps():
    with pytest.raises(PhysicsError):
        mollified_convergence(zero_state(GRID), -4.0, [0.1, 0.2], 1.0)
