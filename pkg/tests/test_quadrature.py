"""
Tests for the quadrature module.

The nested adaptive quadrature and the Gauss product rules are checked
on integrals with known closed forms.
"""
import math

import numpy as np
import pytest

from modules.delta_hydrogenic import solve_deltas, solve_orbital, zero_deltas
from modules.errors import ToleranceNotMetError
from modules.integral_engine import normalization
from modules.quadrature import coupling_oracle, cutoff_radius, orbital_norm, orbital_overlap, quad_oracle
from modules.quantum_model import Orbital
from modules.settings import settings_override


def test_cutoff_radius():
    with settings_override(oracle_cutoff=40.0):
        assert cutoff_radius([2.0, 0.5]) == pytest.approx(80.0)


def test_quad_oracle_truncates_infinite_range():
    value = quad_oracle(lambda x: x * x * math.exp(-x), [(0, math.inf)], r_max=cutoff_radius([1.0]))
    assert value == pytest.approx(2.0, rel=1e-8)


def test_quad_oracle_two_dimensions():
    value = quad_oracle(lambda x, y: x * y, [(0, 1), (0, 2)])
    assert value == pytest.approx(1.0, rel=1e-8)


def test_quad_oracle_reports_failure():
    with pytest.raises(ToleranceNotMetError):
        quad_oracle(lambda x: 1.0 / x, [(0, 1)], tol=1e-12)


def test_hydrogen_ground_norm():
    solution = solve_orbital(Orbital(1, 0, 0, 0, 0), 1, zero_deltas(1), xi=1.3)
    assert orbital_norm(solution) == pytest.approx(math.pi / 1.3 ** 3, rel=1e-10)


@pytest.mark.parametrize('core', [(1, 0, 0, 0, 0), (2, 0, 0, 0, 1), (2, 1, 0, 0, 0), (2, 1, 1, 0, 1)])
def test_norm_agrees_with_closed_form(core):
    d = solve_deltas(2)
    o = Orbital(*core, xi=1.7)
    solution = solve_orbital(o, 2, d, xi=o.xi)
    assert orbital_norm(solution) == pytest.approx(normalization(o, d) ** -2, rel=1e-6)


def test_overlap_of_different_exponents():
    d = zero_deltas(1)
    first = solve_orbital(Orbital(1, 0, 0, 0, 0), 1, d, xi=1.0)
    second = solve_orbital(Orbital(1, 0, 0, 0, 0), 1, d, xi=2.0)
    normalized = orbital_overlap(first, second) / math.sqrt(orbital_norm(first) * orbital_norm(second))
    assert normalized == pytest.approx((2 * math.sqrt(2.0) / 3.0) ** 3, rel=1e-10)


def test_coupling_oracle_coulomb_integral():
    o = Orbital(1, 0, 0, 0, 0, 1.5)
    h = np.array([1.0, 0, 0, -1] + [0] * 8)
    value = coupling_oracle(o, o, o, o, h, zero_deltas(2), tol=1e-9)
    assert value == pytest.approx(5 * 1.5 / 8, rel=1e-7)


@pytest.mark.parametrize('xi_a, xi_b', [(0.8, 2.5), (2.5, 0.8), (1.2, 1.2)])
def test_coupling_oracle_unequal_exponents(xi_a, xi_b):
    a = Orbital(1, 0, 0, 0, 0, xi_a)
    b = Orbital(1, 0, 0, 0, 0, xi_b)
    h = np.array([1.0, 0, 0, -1] + [0] * 8)
    expected = xi_a * xi_b * (xi_a ** 2 + 3 * xi_a * xi_b + xi_b ** 2) / (xi_a + xi_b) ** 3
    assert coupling_oracle(a, a, b, b, h, zero_deltas(2), tol=1e-9) == pytest.approx(expected, rel=1e-8)


def test_coupling_oracle_needs_two_levels():
    o = Orbital(1, 0, 0, 0, 0, 1.5)
    h = np.array([1.0, 0, 0, -1] + [0] * 8)
    with settings_override(oracle_max_levels=1):
        with pytest.raises(ToleranceNotMetError):
            coupling_oracle(o, o, o, o, h, zero_deltas(2))
