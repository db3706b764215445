"""
Tests for the DOCX report generator.

A report is generated from the closed-form hydrogen table and read back
with python-docx to check the heading, the results table and the
conclusion.
"""
from docx import Document

from generator import generate_table_report
from modules.spectra_harness import ComparisonRow, reproduce_table


def test_generate_table_report_creates_file(tmp_path):
    rows = reproduce_table(2)
    out_file = tmp_path / 'table2.docx'
    generate_table_report({'table_id': 2, 'rows': rows, 'source': 'QED',
                           'method': 'Замкнутые формулы.'}, str(out_file))
    assert out_file.exists()
    document = Document(str(out_file))
    texts = [p.text for p in document.paragraphs]
    assert texts[0].startswith('Таблица 2.')
    assert 'Все контрольные строки воспроизведены.' in texts
    table = document.tables[0]
    assert len(table.rows) == len(rows) + 1
    assert table.rows[1].cells[-1].text == 'совпадает'


def test_failed_gated_row_is_marked(tmp_path):
    row = ComparisonRow('T2:H', 3, '2,0,0,0,0', 0.5, 0.375, 0.375, 'QED', 33.3, False, True)
    out_file = tmp_path / 'failed.docx'
    generate_table_report({'table_id': 2, 'rows': [row]}, str(out_file))
    document = Document(str(out_file))
    assert document.tables[0].rows[1].cells[-1].text == 'ОШИБКА'
    assert 'Не воспроизведено контрольных строк: 1.' in [p.text for p in document.paragraphs]


def test_empty_report(tmp_path):
    out_file = tmp_path / 'empty.docx'
    generate_table_report({'table_id': 5, 'rows': []}, str(out_file))
    document = Document(str(out_file))
    assert not document.tables
    assert 'Строки не вычислялись.' in [p.text for p in document.paragraphs]
