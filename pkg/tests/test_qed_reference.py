"""
Tests for the qed_reference module.

The Dirac, Lamb and magnetic terms are checked against closed-form
limits, and the level differences against the QED columns bundled with
the reference data for hydrogen and U⁹¹⁺.
"""
import pytest

from modules.errors import DomainError
from modules.qed_reference import (QED_ROWS, dirac_energy, lamb_term, magnetic_term, qed_delta,
                                   qed_energy, qed_level, qed_level_table)
from modules.quantum_model import ALPHA, CONSTS
from modules.spectra_harness import Source, load_reference


def _printed_qed(system):
    return {level.row_id: level.energy for level in load_reference()
            if level.system == system and level.source is Source.QED}


def test_dirac_ground_state_hydrogen():
    assert dirac_energy(1, 0, 1) == pytest.approx(-0.50000666, abs=1e-7)
    assert dirac_energy(1, 0, 1) == pytest.approx(-0.5 - ALPHA ** 2 / 8, abs=1e-9)


def test_dirac_nonrelativistic_limit():
    assert dirac_energy(3, 2, 1) == pytest.approx(-1 / 18, abs=1e-4)
    for n in range(1, 6):
        for l in range(n):
            assert abs(dirac_energy(n, l, 1) + 1 / (2 * n ** 2)) <= 2e-5


def test_dirac_uranium():
    assert dirac_energy(1, 0, 92) == pytest.approx(-4861.20, abs=0.01)


def test_dirac_domain_error():
    with pytest.raises(DomainError):
        dirac_energy(1, 0, 140)
    with pytest.raises(DomainError):
        dirac_energy(1, 1, 1)


def test_lamb_term_branches():
    assert lamb_term(2, 0, 1, 1) == pytest.approx(8 * CONSTS.delta2S / 8)
    assert lamb_term(2, 0, 1, 1) == pytest.approx(0.4138 * ALPHA ** 3)
    assert lamb_term(2, 1, 0, 1) == 0.0
    assert lamb_term(1, 0, 1, 1) == 0.0
    assert lamb_term(2, 0, 0, 1) == 0.0


def test_ground_state_lamb_identity():
    for Z in (1, 2, 92):
        difference = qed_energy(1, 0, 0, 1, Z) - qed_energy(1, 0, 0, 0, Z)
        assert difference == pytest.approx(CONSTS.delta1S * Z ** 3, rel=1e-9)


def test_magnetic_term_ground_hydrogen():
    assert magnetic_term(1, 0, 0, 1, 1) - magnetic_term(1, 0, 0, 0, 1) == pytest.approx(0.0000002159, abs=1e-11)


def test_qed_level_fields():
    level = qed_level(2, 1, 1, 1, 1)
    assert (level.n, level.l, level.m, level.J, level.Z) == (2, 1, 1, 1, 1)
    assert level.energy < 0


def test_qed_delta_examples():
    assert qed_delta(2, 0, 0, 0, 1) == pytest.approx(0.3750047181, abs=1e-9)
    assert qed_delta(1, 0, 0, 1, 92) == pytest.approx(0.1681208972, abs=1e-9)
    # the seventh printed row is the odd-m level, the fifth the m = 0 level
    assert qed_delta(2, 1, 1, 0, 1) == pytest.approx(0.3750064002, abs=1e-9)
    assert qed_delta(2, 1, 0, 0, 1) == pytest.approx(0.3750063957, abs=1e-9)
    assert QED_ROWS[4] == (2, 1, 0, 0) and QED_ROWS[6] == (2, 1, 1, 0)


def test_hydrogen_table_matches_printed_column():
    printed = _printed_qed('T2:H')
    for row_id, value in qed_level_table(1):
        if value is None:
            assert row_id not in printed
            continue
        assert value == pytest.approx(printed[row_id], abs=1e-9)


def test_uranium_table_matches_printed_column():
    printed = _printed_qed('T3:U91+')
    for row_id, value in qed_level_table(92):
        if value is None:
            continue
        assert value == pytest.approx(printed[row_id], rel=1e-9, abs=1e-9)


def test_row_mapping_has_nine_entries():
    assert len(QED_ROWS) == 9
    assert QED_ROWS[-1] is None
    assert qed_level_table(1)[0] == (1, 0.0)
