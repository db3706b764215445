"""
Tests for the integral_engine module.

One-electron integrals are checked against hydrogenic closed forms, the
two-electron integral against the Coulomb integral of 1s densities and
against the quadrature oracle on twenty randomized orbital quadruples.
The cache and the interaction descriptor are tested separately.
"""
from concurrent.futures import ThreadPoolExecutor
import math

import numpy as np
import pytest

from modules.delta_hydrogenic import solve_deltas, zero_deltas
from modules.energy_functional import FunctionalMode, interaction_rows
from modules.errors import DomainError
from modules.integral_engine import (ANALYTIC, IntegralCache, IntegralKey, InteractionTerm,
                                     angular_reduction, canonical, coupling, coupling_with_path,
                                     nuclear, normalization, overlap)
from modules.quadrature import coupling_oracle
from modules.quantum_model import Orbital


def test_overlap_has_unit_diagonal():
    d = solve_deltas(2)
    for core in [(1, 0, 0, 0, 0), (2, 1, 1, 0, 1), (3, 2, 0, 1, 0)]:
        o = Orbital(*core, xi=1.4)
        assert overlap(o, o, d) == pytest.approx(1.0, rel=1e-12)


def test_overlap_of_1s_orbitals():
    d = zero_deltas(1)
    a = Orbital(1, 0, 0, 0, 0, 1.0)
    b = Orbital(1, 0, 0, 0, 0, 2.0)
    expected = (2 * math.sqrt(2.0) / 3.0) ** 3
    assert overlap(a, b, d) == pytest.approx(expected, rel=1e-12)
    assert overlap(a, b, d) == pytest.approx(overlap(b, a, d), rel=1e-14)


def test_nuclear_attraction_of_bohr_orbitals():
    d = zero_deltas(1)
    assert nuclear(Orbital(1, 0, 0, 0, 0, 1.3), Orbital(1, 0, 0, 0, 0, 1.3), d) == pytest.approx(1.3)
    # ⟨1/r⟩ = ξ/n for the eigen exponent ξ = Z/n
    assert nuclear(Orbital(2, 1, 0, 0, 0, 0.5), Orbital(2, 1, 0, 0, 0, 0.5), d) == pytest.approx(0.25)


def test_orthogonal_angular_parts():
    d = zero_deltas(1)
    assert overlap(Orbital(2, 0, 0, 0, 0, 0.5), Orbital(2, 1, 1, 0, 1, 0.5), d) == 0.0


def test_normalization_is_positive():
    assert normalization(Orbital(2, 1, 0, 0, 1, 0.8), solve_deltas(3)) > 0


@pytest.mark.parametrize('xi_a, xi_b', [(1.0, 1.0), (1.6875, 1.6875), (2.2, 1.2)])
def test_coulomb_integral_of_1s_densities(xi_a, xi_b):
    d = zero_deltas(2)
    a = Orbital(1, 0, 0, 0, 0, xi_a)
    b = Orbital(1, 0, 0, 0, 0, xi_b)
    expected = xi_a * xi_b * (xi_a ** 2 + 3 * xi_a * xi_b + xi_b ** 2) / (xi_a + xi_b) ** 3
    value = coupling(a, a, b, b, InteractionTerm.coulomb(), d, cache=IntegralCache())
    assert value == pytest.approx(expected, rel=1e-10)


def test_exchange_symmetry():
    d = zero_deltas(2)
    a = Orbital(1, 0, 0, 0, 0, 2.1)
    b = Orbital(2, 1, 0, 0, 0, 0.9)
    term = InteractionTerm.coulomb()
    cache = IntegralCache()
    direct = coupling(a, b, a, b, term, d, cache=cache)
    assert coupling(b, a, a, b, term, d, cache=cache) == pytest.approx(direct, rel=1e-10)
    assert coupling(a, b, b, a, term, d, cache=cache) == pytest.approx(direct, rel=1e-10)


_CORES = [
    (1, 0, 0, 0, 0),
    (1, 0, 0, 0, 1),
    (2, 0, 0, 0, 0),
    (2, 0, 0, 0, 1),
    (2, 1, 0, 0, 0),
    (2, 1, 0, 0, 1),
    (2, 1, 1, 0, 1),
    (2, 1, -1, 0, 1),
]


def _random_cases(count, seed):
    rng = np.random.default_rng(seed)
    terms = [InteractionTerm.coulomb()] + interaction_rows(FunctionalMode.IMPROVED_VTHETA)
    cases = []
    for _ in range(count):
        picks = rng.integers(0, len(_CORES), 4)
        xis = rng.uniform(0.8, 2.5, 2)
        a, b = (Orbital(*_CORES[k], xi=float(xis[0])) for k in picks[:2])
        c, e = (Orbital(*_CORES[k], xi=float(xis[1])) for k in picks[2:])
        cases.append((a, b, c, e, terms[int(rng.integers(0, len(terms)))]))
    return cases


@pytest.mark.parametrize('case', _random_cases(20, seed=11))
def test_analytic_coupling_matches_oracle(case):
    a, b, c, e, term = case
    d = zero_deltas(2)
    value, path = coupling_with_path(a, b, c, e, term, d, cache=IntegralCache())
    assert path == ANALYTIC
    oracle = coupling_oracle(a, b, c, e, term.h, d, tol=1e-8)
    assert value == pytest.approx(oracle, rel=1e-6, abs=1e-9)


def test_reduction_needs_integer_exponents():
    d = solve_deltas(2)
    cores = ((1, 0, 0, 0, 0), (1, 0, 0, 0, 0), (1, 0, 0, 0, 0), (1, 0, 0, 0, 0))
    angular = (0,) * 8
    assert angular_reduction(cores, angular, d, 1e-9) is None
    assert angular_reduction(cores, angular, d, 1e-4)


def test_cache_statistics():
    cache = IntegralCache()
    d = zero_deltas(2)
    o = Orbital(1, 0, 0, 0, 0, 1.5)
    term = InteractionTerm.coulomb()
    coupling(o, o, o, o, term, d, cache=cache)
    coupling(o, o, o, o, term, d, cache=cache)
    assert cache.stats()['hits'] == 1
    assert cache.stats()['misses'] == 1
    assert len(cache) == 1
    cache.clear()
    assert len(cache) == 0 and cache.stats()['hits'] == 0


def test_cache_counters_under_concurrent_reads():
    cache = IntegralCache()
    d = zero_deltas(2)
    o = Orbital(1, 0, 0, 0, 0, 1.5)
    present = IntegralKey.build([o] * 4, InteractionTerm.coulomb(), d, 1e-9)
    absent = IntegralKey.build([o.with_xi(2.5)] * 4, InteractionTerm.coulomb(), d, 1e-9)
    cache.put(present, 0.9375, ANALYTIC)

    def read(index):
        for _ in range(2000):
            cache.get(present if index % 2 else absent)

    with ThreadPoolExecutor(max_workers=8) as pool:
        list(pool.map(read, range(8)))
    stats = cache.stats()
    assert stats['hits'] == 4 * 2000
    assert stats['misses'] == 4 * 2000


def test_cache_key_rounds_exponents():
    o = Orbital(1, 0, 0, 0, 0, 1.0000000000001)
    assert canonical(o).xi == 1.0
    key = IntegralKey.build([canonical(o)] * 4, InteractionTerm.coulomb(), zero_deltas(1), 1e-9)
    assert key == IntegralKey.build([o.with_xi(1.0)] * 4, InteractionTerm.coulomb(), zero_deltas(1), 1e-9)


def test_interaction_term_validation():
    with pytest.raises(DomainError):
        InteractionTerm((1.0, 0, 0, -1))
    with pytest.raises(DomainError):
        InteractionTerm((1.0, 0, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0))
    term = InteractionTerm((0.5, 1, -1, 0, 1, 0, 0, 1, 1, 0, 0, 1))
    assert term.swapped().h == (0.5, -1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0)
    assert term.swapped().swapped() == term
