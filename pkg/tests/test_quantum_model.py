"""
Tests for the quantum_model module.

These tests verify the physical constants, orbital and configuration
validation, the orthogonality hint and the text format used by the
command line.
"""
import itertools
import math

import pytest

from modules.errors import ConfigurationFormatError, DomainError
from modules.quantum_model import (ALPHA, CONSTS, Configuration, Orbital, PhysConsts,
                                   ensure_valid_configuration, orthogonality_hint,
                                   format_configuration, load_configuration,
                                   parse_configuration, permuted, validate_configuration,
                                   validate_orbital)


def test_constants_recomputed_from_alpha():
    assert CONSTS.alpha == 1.0 / 137.036
    assert CONSTS.delta1S / ALPHA ** 3 == pytest.approx(0.5556, rel=1e-15)
    assert CONSTS.delta2S / ALPHA ** 3 == pytest.approx(0.4138, rel=1e-15)
    other = PhysConsts(alpha=0.01)
    assert other.delta1S == pytest.approx(0.5556e-6)


def test_valid_orbital():
    assert validate_orbital(Orbital(2, 0, 0, 0, 0, 1.0)) == []


def test_orbital_l_out_of_range():
    violations = validate_orbital(Orbital(1, 1, 0, 0, 0, 1.0))
    assert any('l ≤ n−1' in v for v in violations)


def test_orbital_parity_required_for_nonzero_m():
    violations = validate_orbital(Orbital(2, 1, 1, 0, 0, 1.0))
    assert "P must be 1 when m≠0" in violations


def test_orbital_reports_every_violation():
    violations = validate_orbital(Orbital(1, 0, 0, 2, 3, -1.0))
    assert len(violations) == 3
    assert validate_orbital(Orbital(1, 0, 0, 2, 3, -1.0)) == violations


def test_helium_ground_is_valid():
    c = Configuration.build(2, (Orbital(1, 0, 0, 0, 0), Orbital(1, 0, 0, 0, 1)))
    assert validate_configuration(c) == []
    assert c.N == 2
    assert c.symmetry == ((1, 1), (1, 1))


def test_identical_orbitals_with_zero_symmetry_rejected():
    o = Orbital(1, 0, 0, 0, 0, 1.5)
    c = Configuration.build(2, (o, o), {(0, 1): 0})
    assert any('zero-norm' in v for v in validate_configuration(c))
    with pytest.raises(DomainError):
        ensure_valid_configuration(c)


def test_lithium_configuration_is_valid():
    c = Configuration.build(3, (Orbital(1, 0, 0, 0, 0), Orbital(1, 0, 0, 0, 1),
                                Orbital(2, 0, 0, 0, 1)))
    assert validate_configuration(c) == []


def test_asymmetric_matrix_rejected():
    orbitals = (Orbital(1, 0, 0, 0, 0), Orbital(2, 0, 0, 0, 0))
    c = Configuration(1, orbitals, ((1, 0), (1, 1)))
    assert validate_configuration(c)


def test_with_exponents_and_permutation():
    c = Configuration.build(3, (Orbital(1, 0, 0, 0, 0), Orbital(1, 0, 0, 0, 1),
                                Orbital(2, 0, 0, 0, 1)), {(0, 2): 0})
    moved = c.with_exponents((2.7, 2.7, 0.55))
    assert moved.exponents == (2.7, 2.7, 0.55)
    swapped = permuted(moved, (2, 0, 1))
    assert swapped.orbitals[0] == moved.orbitals[2]
    assert swapped.symmetry[0][1] == 0
    assert swapped.symmetry[1][2] == 1
    with pytest.raises(DomainError):
        c.with_exponents((1.0,))


@pytest.mark.parametrize('order', list(itertools.permutations(range(3))))
def test_permutation_keeps_symmetry_with_orbital_pairs(order):
    c = Configuration.build(3, (Orbital(1, 0, 0, 0, 0, 2.7), Orbital(1, 0, 0, 0, 1, 2.7),
                                Orbital(2, 0, 0, 0, 1, 0.55)), {(1, 2): 0})
    moved = permuted(c, order)
    for a in range(3):
        for b in range(3):
            assert moved.symmetry[a][b] == c.symmetry[order[a]][order[b]]
            assert moved.symmetry[a][b] == moved.symmetry[b][a]
    zero = [(moved.orbitals[a], moved.orbitals[b]) for a in range(3) for b in range(a + 1, 3)
            if moved.symmetry[a][b] == 0]
    assert len(zero) == 1 and set(zero[0]) == {c.orbitals[1], c.orbitals[2]}


def test_orthogonality_hint():
    a = Orbital(1, 0, 0, 0, 0)
    b = Orbital(2, 1, 0, 0, 0)
    # |(0 − 2)/2 + 0 − 1| = 2
    assert orthogonality_hint(a, b, 0) is True
    # |(0 − 6)/2 + 0 − 2| = 5
    assert orthogonality_hint(a, Orbital(3, 2, 0, 0, 0), 0) is False
    assert orthogonality_hint(a, a, 1) is False
    assert orthogonality_hint(a, Orbital(1, 0, 0, 0, 1), 0) is True


def test_parse_format_roundtrip(tmp_path):
    text = """
    # lithium
    Z 3
    1 0 0 0 0 2.7076
    1 0 0 0 1 2.7112
    2 0 0 0 1 0.5541
    S 1 3 0
    """
    c = parse_configuration(text)
    assert c.Z == 3
    assert c.symmetry[0][2] == 0 and c.symmetry[2][0] == 0
    path = tmp_path / 'li.txt'
    path.write_text(format_configuration(c), encoding='utf-8')
    assert load_configuration(str(path)) == c


def test_parse_error_carries_line_number():
    with pytest.raises(ConfigurationFormatError) as info:
        parse_configuration("Z 2\n1 0 0 0 0 1.0\n1 0 0 x 1 1.0\n")
    assert info.value.line_number == 3


def test_parse_requires_charge():
    with pytest.raises(ConfigurationFormatError):
        parse_configuration("1 0 0 0 0 1.0\n")


def test_parse_rejects_invalid_content():
    with pytest.raises(DomainError):
        parse_configuration("Z 1\n1 1 0 0 0 1.0\n")


def test_orbital_label():
    assert Orbital(2, 1, 1, 0, 1).label() == '2,1,1,0,1'
    assert math.isclose(Orbital(1, 0, 0, 0, 0).with_xi(2).xi, 2.0)
