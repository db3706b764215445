"""
Functions for generating table-reproduction reports in DOCX format.

A report documents one reproduced table of energies and contains:

* Title and date.
* Source data (system, reference sources, Hamiltonian mode).
* Method (how the energies were obtained: closed forms, the energy
  functional at printed exponents or after minimization).
* Results table: one line per comparison row with the computed value,
  the printed value, the reference, the error rate and the check.
* Conclusion with pass/fail counts.

The primary entry point is :func:`generate_table_report`, which accepts
the rows produced by :func:`modules.spectra_harness.reproduce_table`
and writes a DOCX file.

This implementation relies on the ``python‑docx`` package.  If the
package is not installed, install it via pip using the command
``pip install python-docx``.
"""

from typing import Any, Dict, List, Optional, Sequence
from datetime import datetime

try:
    from docx import Document
    from docx.shared import Pt
    from docx.oxml.ns import qn
except ImportError as exc:  # pragma: no cover
    raise RuntimeError(
        "python-docx is required to use the report generator. "
        "Install it with 'pip install python-docx'."
    ) from exc

TABLE_TITLES = {
    1: 'Энергия атома гелия',
    2: 'Сверхтонкая структура атома водорода',
    3: 'Сверхтонкая структура иона U⁹¹⁺',
    4: 'Энергии возбуждённых состояний атома гелия',
    5: 'Энергии возбуждённых состояний атома лития',
    6: 'Энергии основных состояний',
}

RESULT_HEADER = ['Система', '№', 'Конфигурация', 'Расчёт', 'Напечатано', 'Эталон', 'Источник', 'ε, %', 'Проверка']


def _set_font(run, size: int) -> None:
    run.font.name = 'Times New Roman'
    run._element.rPr.rFonts.set(qn('w:eastAsia'), 'Times New Roman')
    run.font.size = Pt(size)


def _add_heading(document: Document, text: str, level: int = 1) -> None:
    """Add a heading to the document with a consistent style."""
    paragraph = document.add_heading(level=level)
    _set_font(paragraph.add_run(text), 14 if level == 1 else 12)


def _add_paragraph(document: Document, text: str, bold: bool = False) -> None:
    """Add a normal paragraph to the document with optional bold text."""
    run = document.add_paragraph().add_run(text)
    _set_font(run, 12)
    run.bold = bold


def _format_value(value: Optional[float]) -> str:
    return '' if value is None else f"{value:.10g}"


def _row_cells(row: Any) -> List[str]:
    if row.passed:
        verdict = 'совпадает'
    else:
        verdict = 'ОШИБКА' if row.gated else 'расхождение'
    return [row.system, str(row.row_id), row.label, _format_value(row.computed),
            _format_value(row.paper), _format_value(row.reference), row.source or '',
            _format_value(row.error_pct), verdict]


def _add_results_table(document: Document, rows: Sequence[Any]) -> None:
    table = document.add_table(rows=1, cols=len(RESULT_HEADER))
    table.style = 'Table Grid'
    for cell, header in zip(table.rows[0].cells, RESULT_HEADER):
        cell.text = header
    for row in rows:
        for cell, text in zip(table.add_row().cells, _row_cells(row)):
            cell.text = text
    document.add_paragraph()


def generate_table_report(data: Dict[str, Any], output_path: str) -> None:
    """
    Generate a DOCX report for one reproduced table.

    Parameters
    ----------
    data : dict
        Report contents.  Expected keys:

        * ``table_id`` (int) – number of the reproduced table.
        * ``rows`` (list[ComparisonRow]) – comparison rows.
        * ``source`` (str) – description of the reference data (optional).
        * ``method`` (str) – description of the computation (optional).
        * ``notes`` (str) – additional remarks for the conclusion (optional).

    output_path : str
        The path where the generated DOCX file will be saved.

    Returns
    -------
    None
    """
    table_id = data['table_id']
    rows = list(data.get('rows', []))
    document = Document()

    _add_heading(document, f"Таблица {table_id}. {TABLE_TITLES.get(table_id, '')}".strip(), level=1)
    _add_paragraph(document, f"Дата: {datetime.now().strftime('%d.%m.%Y')}")

    source = data.get('source')
    if source:
        _add_heading(document, '1. Исходные данные', level=2)
        _add_paragraph(document, source)

    method = data.get('method')
    if method:
        _add_heading(document, '2. Методика расчёта', level=2)
        _add_paragraph(document, method)

    _add_heading(document, '3. Результаты', level=2)
    if rows:
        _add_results_table(document, rows)
    else:
        _add_paragraph(document, 'Строки не вычислялись.')

    passed = sum(1 for row in rows if row.passed)
    gated = [row for row in rows if row.gated]
    failed_gated = sum(1 for row in gated if not row.passed)
    _add_heading(document, '4. Заключение', level=2)
    _add_paragraph(document, f"Совпало с напечатанными значениями: {passed} из {len(rows)}.")
    if gated:
        verdict = ('Все контрольные строки воспроизведены.' if failed_gated == 0
                   else f"Не воспроизведено контрольных строк: {failed_gated}.")
        _add_paragraph(document, verdict, bold=True)
    notes = data.get('notes')
    if notes:
        _add_paragraph(document, notes)

    document.save(output_path)
