"""
Tests for the variational_optimizer module.

The optimizer is run on one- and two-electron problems with known
minima.  Lithium and the helium excited scan need many functional
evaluations and are marked ``slow``.
"""
import numpy as np
import pytest
from scipy import optimize

from modules import variational_optimizer
from modules.energy_functional import FunctionalMode
from modules.errors import DomainError
from modules.integral_engine import IntegralCache
from modules.quantum_model import Configuration, Orbital
from modules.variational_optimizer import (MinimizeOptions, default_initial_exponents, excited_scan,
                                           minimize, screened_count)


def helium(xi1=2.0, xi2=1.7, second=(1, 0, 0, 0, 1), symmetry=1):
    return Configuration.build(2, (Orbital(1, 0, 0, 0, 0, xi1), Orbital(*second, xi=xi2)),
                               {(0, 1): symmetry})


def lithium():
    return Configuration.build(3, (Orbital(1, 0, 0, 0, 0), Orbital(1, 0, 0, 0, 1),
                                   Orbital(2, 0, 0, 0, 1)))


def test_screened_count():
    c = lithium()
    assert [screened_count(c, k) for k in range(3)] == [0, 1, 2]


def test_default_initial_exponents_bare():
    xi = default_initial_exponents(helium(), FunctionalMode.SCHRODINGER_BARE)
    assert xi == pytest.approx((2.0, 1.7))
    xi = default_initial_exponents(lithium(), FunctionalMode.SCHRODINGER_BARE)
    assert xi == pytest.approx((3.0, 2.7, 2.4 / 2))


def test_hydrogen_minimum():
    c = Configuration.build(1, (Orbital(1, 0, 0, 0, 0, 0.7),))
    result = minimize(c, MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE, restarts=2))
    assert result.energy == pytest.approx(-0.5, abs=1e-9)
    assert result.xi_star[0] == pytest.approx(1.0, abs=1e-4)
    assert result.converged
    assert len(result.restart_energies) == 2
    assert result.history == sorted(result.history, reverse=True)


def test_split_shell_helium():
    result = minimize(helium(), MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE, restarts=2),
                      IntegralCache())
    assert result.energy == pytest.approx(-2.875661, abs=5e-5)
    assert sorted(result.xi_star) == pytest.approx([1.19, 2.18], abs=2e-2)


def test_minimize_is_deterministic():
    c = Configuration.build(1, (Orbital(2, 0, 0, 0, 0, 0.3),))
    opts = MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE, restarts=3, seed=5)
    first = minimize(c, opts)
    second = minimize(c, opts)
    assert first.xi_star == second.xi_star
    assert first.restart_energies == second.restart_energies


def test_invalid_options():
    c = Configuration.build(1, (Orbital(1, 0, 0, 0, 0),))
    with pytest.raises(DomainError):
        minimize(c, MinimizeOptions(xi_bounds=((2.0, 1.0),)))
    with pytest.raises(DomainError):
        minimize(c, MinimizeOptions(xi_init=(1.0, 1.0)))
    with pytest.raises(DomainError):
        minimize(c, MinimizeOptions(restarts=0))


def test_result_dict():
    c = Configuration.build(1, (Orbital(1, 0, 0, 0, 0, 0.9),))
    data = minimize(c, MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE, restarts=1)).to_dict()
    assert set(data) == {'xi_star', 'energy', 'evals', 'converged', 'history', 'restart_energies'}


def test_scan_rejects_mixed_charges():
    with pytest.raises(DomainError):
        excited_scan([helium(), lithium()])
    assert excited_scan([]) == []


def test_scan_reports_failed_rows():
    broken = Configuration.build(2, (Orbital(1, 0, 0, 0, 0, 1.0), Orbital(1, 0, 0, 0, 0, 1.0)),
                                 {(0, 1): 0})
    rows = excited_scan([helium(), broken], MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE,
                                                            restarts=1))
    assert rows[0].delta_e == 0.0
    assert rows[1].result is None and rows[1].error


def test_scan_flags_rows_without_ground_state():
    broken = Configuration.build(2, (Orbital(1, 0, 0, 0, 0, 1.0), Orbital(1, 0, 0, 0, 0, 1.0)),
                                 {(0, 1): 0})
    rows = excited_scan([broken, helium()], MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE,
                                                            restarts=1))
    assert rows[0].result is None
    assert rows[1].result is not None
    assert rows[1].delta_e is None
    assert rows[1].error.startswith("нет основного состояния")


def test_scan_passes_exponent_bounds():
    c = Configuration.build(1, (Orbital(1, 0, 0, 0, 0, 0.7),))
    rows = excited_scan([c], MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE, restarts=1,
                                             xi_bounds=((0.2, 0.4),)))
    assert 0.2 <= rows[0].result.xi_star[0] <= 0.4
    assert rows[0].result.xi_star[0] == pytest.approx(0.4, abs=1e-3)


def _fake_runs(outcomes):
    calls = iter(outcomes)

    def fake(fun, x0, **kwargs):
        energy, success, spread = next(calls)
        fun(x0)
        simplex = np.array([x0, x0 + spread])
        values = np.array([energy, energy + spread])
        return optimize.OptimizeResult(x=np.array(x0), fun=energy, success=success, message="",
                                       final_simplex=(simplex, values))
    return fake


@pytest.mark.parametrize("outcomes, expected", [
    ([(-0.6, False, 0.5), (-0.5, True, 0.0)], False),
    ([(-0.5, True, 0.0), (-0.6, True, 0.5)], False),
    ([(-0.5, False, 0.5), (-0.6, True, 0.0)], True),
])
def test_converged_follows_best_run(monkeypatch, outcomes, expected):
    monkeypatch.setattr(variational_optimizer.optimize, "minimize", _fake_runs(outcomes))
    c = Configuration.build(1, (Orbital(1, 0, 0, 0, 0, 0.9),))
    result = minimize(c, MinimizeOptions(mode=FunctionalMode.SCHRODINGER_BARE, restarts=2))
    assert result.converged is expected
    assert result.restart_energies == [energy for energy, _, _ in outcomes]


@pytest.mark.slow
def test_lithium_ground_state():
    start = lithium().with_exponents((2.7076, 2.7112, 0.5541))
    result = minimize(start, MinimizeOptions(mode=FunctionalMode.IMPROVED_VTHETA, restarts=2))
    assert result.energy == pytest.approx(-7.47805890, abs=5e-4)
    assert result.xi_star == pytest.approx((2.7076, 2.7112, 0.5541), abs=2e-2)


@pytest.mark.slow
def test_helium_excited_scan():
    templates = [helium(2.20144, 1.20162), helium(2.0, 0.6, second=(2, 0, 0, 0, 1))]
    rows = excited_scan(templates, MinimizeOptions(mode=FunctionalMode.IMPROVED_VTHETA, restarts=2),
                        labels=['1', '2'])
    assert rows[1].delta_e == pytest.approx(0.7279475, abs=5e-4)
