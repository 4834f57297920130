"""Acceptance suite: one test per exit criterion, at pinned tolerances."""

from sgdelta.acceptance import CRITERIA


def _check(number: int):
    res = CRITERIA[number]()
    print(
        f"[{'PASS' if res.passed else 'FAIL'}] criterion {res.number:2d} "
        f"({res.elapsed_s:6.1f}s)  {res.name}: {res.detail}"
    )
    assert res.passed, f"criterion {number} failed: {res.detail}"


def test_criterion_01_zero_background_bound_state():
    _check(1)


def test_criterion_02_existence_boundary():
    _check(2)


def test_criterion_03_closed_form_energies():
    _check(3)


def test_criterion_04_stationarity_under_evolution():
    _check(4)


def test_criterion_05_spectral_dichotomy():
    _check(5)


def test_criterion_06_kernel_triviality():
    _check(6)


def test_criterion_07_growth_rate_consistency():
    _check(7)


def test_criterion_08_nonlinear_stability():
    _check(8)


def test_criterion_09_minimization_oracle():
    _check(9)


def test_criterion_10_linear_oracle():
    _check(10)


def test_criterion_11_mollified_convergence():
    _check(11)


def test_criterion_12_scattering_sanity():
    _check(12)
