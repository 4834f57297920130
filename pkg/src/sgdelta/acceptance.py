"""Acceptance suite: every exit criterion of the laboratory as one check.

Each criterion is a self-contained function returning a CriterionResult
with the measured numbers in its detail string.  The pytest module
tests/test_acceptance.py asserts each one; the command line `validate`
subcommand prints the same table.  Tolerances are pinned here, not in
the callers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import ImpurityParams, deviation_norm, energy, make_grid, make_state, zero_state
from .dynamics import evolve, linear_kg_reference
from .errors import NoH1WaveError
from .experiments import (
    instability_trial,
    minimize_energy,
    mollified_convergence,
    scattering_sweep,
    stability_trial,
)
from .spectrum import assemble_linearized, eigen_bottom
from .waves import ground_state, ground_state_slopes, gluing_residual, kink_profile

__all__ = ["CriterionResult", "CRITERIA", "run_criteria"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed_s: float


def _result(number: int, name: str, passed: bool, detail: str, t0: float) -> CriterionResult:
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


def criterion_1_zero_background_bound_state() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(40.0, 8001)
    vals = {}
    ok = True
    for q, target in ((-1.0, 0.75), (-1.5, 0.4375)):
        rep = eigen_bottom(assemble_linearized(zero_state(grid), q), k=2)
        vals[q] = rep.eigenvalues[0]
        ok &= abs(vals[q] - target) <= 1e-3
    detail = ", ".join(f"q={q}: lam1={v:.6f}" for q, v in vals.items())
    return _result(1, "zero-background bound state 1-(q/2)^2", ok, detail, t0)


def criterion_2_existence_boundary() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(20.0, 4001)
    ok = True
    notes = []
    for q in (-2.0, -1.0, 0.5, 2.0):
        try:
            ground_state(grid, q)
            ok = False
            notes.append(f"q={q}: wave built (should not exist)")
        except NoH1WaveError:
            pass
    worst = 0.0
    for q in (-4.0, -2.1, 2.1, 6.0):
        r = abs(gluing_residual(ground_state(grid, q), q, slopes=ground_state_slopes(q)))
        worst = max(worst, r)
    ok &= worst <= 1e-10
    notes.append(f"max exact-path gluing residual {worst:.2e}")
    return _result(2, "existence boundary |q| > 2", ok, "; ".join(notes), t0)


def criterion_3_closed_form_energies() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(20.0, 40001)
    errs = []
    for q in (-1.0, 1.0):
        e = energy(kink_profile(grid), ImpurityParams(q=q)).total
        errs.append(abs(e - (8.0 + 2.0 * q)))
    eq = energy(ground_state(grid, -4.0), ImpurityParams(q=-4.0)).total
    errs.append(abs(eq - (-2.0)))
    ok = max(errs) <= 1e-6
    detail = f"E(K)q=-1,+1 and E(Q)q=-4 errors: {errs[0]:.2e}, {errs[1]:.2e}, {errs[2]:.2e}"
    return _result(3, "closed-form energies 8+2q and -2", ok, detail, t0)


def criterion_4_stationarity_under_evolution() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(20.0, 4001)
    ok = True
    notes = []
    for label, wave, q in (
        ("Q,q=-4", ground_state(grid, -4.0), -4.0),
        ("K,q=-1", kink_profile(grid), -1.0),
    ):
        traj = evolve(wave, ImpurityParams(q=q), 50.0, dt=0.005, output_stride=500)
        dev = deviation_norm(traj.final_state, wave).total
        drift = traj.max_relative_drift
        ok &= dev <= 1e-3 and drift <= 1e-4
        notes.append(f"{label}: dev={dev:.2e}, drift={drift:.2e}")
    return _result(4, "stationary waves preserved to T=50", ok, "; ".join(notes), t0)


def criterion_5_spectral_dichotomy() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(40.0, 8001)
    cases = [
        ("K", kink_profile(grid), 1.0, 1),
        ("K", kink_profile(grid), 4.0, 1),
        ("Q", ground_state(grid, 4.0), 4.0, 1),
        ("K", kink_profile(grid), -1.0, 0),
        ("Q", ground_state(grid, -4.0), -4.0, 0),
    ]
    ok = True
    notes = []
    for label, wave, q, morse in cases:
        rep = eigen_bottom(assemble_linearized(wave, q), k=5)
        good = rep.morse_index == morse and rep.morse_index <= 1
        if morse == 0:
            good &= rep.eigenvalues[0] > rep.tol_zero
        ok &= good
        notes.append(f"({label},q={q:g}): n={rep.morse_index}, lam1={rep.eigenvalues[0]:+.4f}")
    return _result(5, "Morse-index sign dichotomy", ok, "; ".join(notes), t0)


def criterion_6_kernel_triviality() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(40.0, 8001)
    ok = True
    notes = []
    for label, wave, q in (
        ("K", kink_profile(grid), 1.0),
        ("K", kink_profile(grid), -1.0),
        ("Q", ground_state(grid, 4.0), 4.0),
        ("Q", ground_state(grid, -4.0), -4.0),
    ):
        rep = eigen_bottom(assemble_linearized(wave, q), k=5)
        gap = float(np.min(np.abs(rep.eigenvalues)))
        ok &= not rep.has_zero_mode and gap > rep.tol_zero
        notes.append(f"({label},q={q:g}): min|lam|={gap:.3f}")
    rep = eigen_bottom(assemble_linearized(kink_profile(grid), 0.0), k=3)
    kx = 2.0 / np.cosh(grid.x)
    kx /= np.sqrt(grid.spacing * np.sum(kx**2))
    v = rep.eigenvectors[:, 0]
    v = v * np.sign(v[grid.zero_index])
    gap0 = float(np.sqrt(grid.spacing * np.sum((v - kx) ** 2)))
    ok &= rep.has_zero_mode and gap0 <= 1e-3
    notes.append(f"(K,q=0): zero mode back, |psi - K_x|_L2 = {gap0:.1e}")
    return _result(6, "kernel trivial for q != 0, zero mode at q = 0", ok, "; ".join(notes), t0)


def criterion_7_growth_rate_consistency() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(20.0, 4001)
    rep = instability_trial(kink_profile(grid), 1.0, 1e-4, 15.0, wave_kind="kink")
    ok = rep.growth_detected and rep.relative_mismatch <= 0.10
    detail = (
        f"sigma={rep.predicted_sigma:.4f}, fitted={rep.fitted_rate:.4f}, "
        f"mismatch={rep.relative_mismatch:.2%}, escape at t={rep.escape_time:.1f}"
    )
    return _result(7, "nonlinear growth rate matches sqrt(-lam1)", ok, detail, t0)


def criterion_8_nonlinear_stability() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(20.0, 4001)
    ok = True
    notes = []
    for label, wave, q in (
        ("K,q=-1", kink_profile(grid), -1.0),
        ("Q,q=-4", ground_state(grid, -4.0), -4.0),
    ):
        rep = stability_trial(wave, q, [1e-3, 1e-2], 200.0, wave_kind=label, seed=0)
        ok &= rep.verdict == "stable-at-horizon" and not rep.escaped
        notes.append(
            f"{label}: C={rep.ratios[0]:.2f},{rep.ratios[1]:.2f} (max {rep.c_max:g})"
        )
    return _result(8, "nonlinear stability for q < 0 branch", ok, "; ".join(notes), t0)


def criterion_9_minimization_oracle() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(20.0, 8001)
    rng = np.random.default_rng(0)
    from .experiments import band_limited_noise

    ok = True
    notes = []
    init = make_state(grid, 0.05 * band_limited_noise(grid, rng), np.zeros(grid.node_count))
    rep = minimize_energy(-1.0, "free", init)
    ok &= rep.nearest_wave == "zero" and abs(rep.final_energy) <= 1e-6
    notes.append(f"q=-1 free -> {rep.nearest_wave}, E={rep.final_energy:.1e}")

    init = make_state(grid, 0.9 * ground_state(grid, -4.0).u1, np.zeros(grid.node_count))
    rep = minimize_energy(-4.0, "free", init)
    ok &= rep.nearest_wave == "ground_state" and abs(rep.final_energy + 2.0) <= 1e-4
    notes.append(f"q=-4 free -> {rep.nearest_wave}, E={rep.final_energy:.6f}")

    rep = minimize_energy(-1.0, "degree1", kink_profile(grid, x0=1.0))
    ok &= rep.nearest_wave == "kink" and abs(rep.final_energy - 6.0) <= 1e-4
    notes.append(f"q=-1 degree1 -> {rep.nearest_wave}, E={rep.final_energy:.6f}")
    return _result(9, "energy minimization reaches 0 / Q / K", ok, "; ".join(notes), t0)


def criterion_10_linear_oracle() -> CriterionResult:
    t0 = time.perf_counter()

    def gap(n: int) -> float:
        g = make_grid(20.0, n)
        s = make_state(g, np.zeros(g.node_count), np.exp(-g.x**2))
        ref = linear_kg_reference(s, 1.0)
        num = evolve(s, ImpurityParams(q=0.0), 1.0, dt=g.spacing / 2, linear=True).final_state
        return float(np.max(np.abs(num.u1 - ref.u1)))

    coarse, fine = gap(2001), gap(4001)
    ratio = coarse / fine
    ok = abs(ratio - 4.0) <= 1.0
    detail = f"sup errors {coarse:.3e} -> {fine:.3e}, ratio {ratio:.2f}"
    return _result(10, "Bessel-kernel oracle, second-order stepper", ok, detail, t0)


def criterion_11_mollified_convergence() -> CriterionResult:
    t0 = time.perf_counter()
    grid = make_grid(20.0, 4001)
    res = mollified_convergence(
        ground_state(grid, -4.0), -4.0, [0.4, 0.2, 0.1, 0.05], 10.0, dt=0.005
    )
    d = res.deviations
    ok = all(a > b for a, b in zip(d, d[1:]))
    detail = "deviations " + " > ".join(f"{x:.4f}" for x in d)
    return _result(11, "mollified -> sharp trajectory convergence", ok, detail, t0)


def criterion_12_scattering_sanity() -> CriterionResult:
    t0 = time.perf_counter()
    coarse = make_grid(20.0, 4001)
    fine = make_grid(20.0, 8001)
    ok = True
    notes = []
    free = scattering_sweep(0.0, [0.1, 0.3, 0.5, 0.8], coarse)
    for out in free:
        ok &= out.outcome == "transmit" and abs(out.mean_velocity - out.speed) <= 1e-2
    notes.append(
        "q=0 exit speeds "
        + ", ".join(f"{o.mean_velocity:.3f}" for o in free)
    )
    base = scattering_sweep(-0.5, [0.05, 0.8], coarse)
    refined = scattering_sweep(-0.5, [0.05, 0.8], fine)
    ok &= base[0].outcome == "capture" and base[1].outcome == "transmit"
    ok &= [o.outcome for o in base] == [o.outcome for o in refined]
    free_refined = scattering_sweep(0.0, [0.1, 0.3, 0.5, 0.8], fine)
    ok &= [o.outcome for o in free_refined] == [o.outcome for o in free]
    ok &= all(o.energy_drift <= 1e-3 for o in free + base + refined + free_refined)
    notes.append(
        f"q=-0.5: v=0.05 {base[0].outcome}, v=0.8 {base[1].outcome}; classes stable under refinement"
    )
    return _result(12, "kink-impurity scattering classes", ok, "; ".join(notes), t0)


CRITERIA = {
    1: criterion_1_zero_background_bound_state,
    2: criterion_2_existence_boundary,
    3: criterion_3_closed_form_energies,
    4: criterion_4_stationarity_under_evolution,
    5: criterion_5_spectral_dichotomy,
    6: criterion_6_kernel_triviality,
    7: criterion_7_growth_rate_consistency,
    8: criterion_8_nonlinear_stability,
    9: criterion_9_minimization_oracle,
    10: criterion_10_linear_oracle,
    11: criterion_11_mollified_convergence,
    12: criterion_12_scattering_sanity,
}


def run_criteria(numbers=None, echo=print) -> list[CriterionResult]:
    """Run the selected criteria (all by default), echoing one line each."""
    selected = sorted(CRITERIA) if numbers is None else sorted(numbers)
    results = []
    for n in selected:
        if n not in CRITERIA:
            raise ValueError(f"unknown acceptance criterion {n}")
        res = CRITERIA[n]()
        results.append(res)
        if echo is not None:
            echo(
                f"[{'PASS' if res.passed else 'FAIL'}] criterion {res.number:2d} "
                f"({res.elapsed_s:6.1f}s)  {res.name}: {res.detail}"
            )
    return results
