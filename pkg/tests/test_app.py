"""
Tests for the command-line entry point.

Commands are invoked through ``app.main`` with an argument list; output
goes to stdout (captured by ``capsys``) or to a file under ``tmp_path``.
Only the fast closed-form and single-evaluation commands are run here.
"""
import json

import pandas as pd

import app
from modules.spectra_harness import read_comparison_csv

HELIUM = 'Z 2\n1 0 0 0 0 2.20144\n1 0 0 0 1 1.20162\n'


def test_qed_rows(capsys):
    assert app.main(['qed', '--Z', '1']) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == 'row_id,label,qed_delta,source'
    assert len(lines) == 10


def test_delta_json(capsys):
    assert app.main(['--format', 'json', 'delta', '--Z', '2']) == 0
    record = json.loads(capsys.readouterr().out)
    assert record['Z'] == 2
    assert abs(record['residual1']) < 1e-8


def test_table_to_csv(tmp_path):
    out_file = tmp_path / 'table2.csv'
    assert app.main(['--out', str(out_file), 'table', '2']) == 0
    rows = read_comparison_csv(str(out_file))
    assert len(rows) == 9 and all(row.passed for row in rows)


def test_table_to_docx(tmp_path):
    out_file = tmp_path / 'table3.docx'
    assert app.main(['--format', 'docx', '--out', str(out_file), 'table', '3']) == 0
    assert out_file.exists()


def test_docx_only_for_tables(capsys):
    assert app.main(['--format', 'docx', 'qed', '--Z', '1']) == 2
    assert 'docx' in capsys.readouterr().err


def test_energy_from_config(tmp_path, capsys):
    config = tmp_path / 'he.txt'
    config.write_text(HELIUM, encoding='utf-8')
    out_file = tmp_path / 'energy.json'
    assert app.main(['--format', 'json', '--out', str(out_file), 'energy', '--config', str(config)]) == 0
    record = json.loads(out_file.read_text(encoding='utf-8'))
    assert abs(record['W'] - (-2.90374994)) < 1e-4
    assert capsys.readouterr().out == ''


def test_bad_configuration_exits_with_error(tmp_path, capsys):
    config = tmp_path / 'bad.txt'
    config.write_text('Z 2\n1 0 0 0\n', encoding='utf-8')
    assert app.main(['energy', '--config', str(config)]) == 2
    assert 'строка 2' in capsys.readouterr().err


def test_validate_reports_line(tmp_path, capsys):
    ref = tmp_path / 'bad.csv'
    ref.write_text('system,row_id,label,energy_au,source\nT2:H,x,"1,0,0,0,0",0,PAPER\n',
                   encoding='utf-8')
    assert app.main(['validate', '--ref', str(ref)]) == 2
    assert 'строка 2' in capsys.readouterr().err


def test_validate_bundled_reference(tmp_path):
    out_file = tmp_path / 'counts.csv'
    assert app.main(['--out', str(out_file), 'validate', '--ref', app.spectra_harness.REFERENCE_PATH]) == 0
    counts = pd.read_csv(out_file).set_index('system')['levels']
    assert counts['T5:Li'] >= 60


def test_lamb_shifts(capsys):
    assert app.main(['--format', 'json', 'lamb', '--Z', '1']) == 0
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r['shift'] for r in records] == ['dE2-dE1', 'dE5-dE3']
    assert abs(records[0]['computed'] - records[0]['reference']) <= 1e-10
