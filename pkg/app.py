"""Командная строка расчёта сверхтонкой структуры.

Подкоманды: ``delta``, ``hydrogenic``, ``qed``, ``integral``, ``energy``,
``minimize``, ``table``, ``lamb``, ``validate``. Вычисленные числа всегда
выводятся вместе с эталоном и погрешностью (или с указанием, что эталона
нет). Код выхода: 0 — успех, 1 — не воспроизведена контрольная строка,
2 — ошибка расчёта или входных данных.
"""

from typing import Any, Dict, List, Optional, Sequence
from dataclasses import asdict
import argparse
import json
import logging
import sys

import pandas as pd

from generator import generate_table_report
from modules import spectra_harness
from modules.delta_hydrogenic import (HYDROGEN_LEVELS, defining_residuals,
                                      hydrogen_level_table, hyperfine_ratios, solve_deltas)
from modules.energy_functional import FunctionalMode, deltas_for, evaluate, interaction_rows
from modules.errors import DomainError, HyperfineError
from modules.integral_engine import InteractionTerm, coupling_with_path
from modules.qed_reference import QED_ROWS, qed_energy, qed_level_table
from modules.quadrature import coupling_oracle
from modules.quantum_model import Orbital, load_configuration
from modules.settings import get_setting, update_settings
from modules.variational_optimizer import MinimizeOptions, minimize

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _round(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{get_setting('float_digits')}g}")
    if isinstance(value, dict):
        return {key: _round(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(item) for item in value]
    return value


def _emit(records: List[Dict[str, Any]], args: argparse.Namespace) -> None:
    """Печатает записи в выбранном формате (в файл ``--out`` или на stdout)."""
    records = [_round(record) for record in records]
    if args.format == 'json':
        text = ''.join(json.dumps(record, ensure_ascii=False) + '\n' for record in records)
    else:
        text = pd.DataFrame(records).to_csv(index=False)
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _parse_core(text: str, size: int) -> List[int]:
    numbers = [int(v) for v in text.replace(' ', '').split(',')]
    if len(numbers) != size:
        raise DomainError(f"ожидается {size} чисел: {text!r}")
    return numbers


def _parse_orbital(text: str) -> Orbital:
    """``n,l,m,J,P[,xi]``."""
    parts = text.replace(' ', '').split(',')
    if len(parts) not in (5, 6):
        raise DomainError(f"ожидается n,l,m,J,P[,xi]: {text!r}")
    xi = float(parts[5]) if len(parts) == 6 else 1.0
    return Orbital(*(int(v) for v in parts[:5]), xi)


def cmd_delta(args: argparse.Namespace) -> int:
    d = solve_deltas(args.Z)
    residuals = defining_residuals(args.Z, d)
    _emit([{'Z': args.Z, 'kdot': d.kdot, 'branch': d.branch,
            'lambda1': d.lambda1, 'lambda2': d.lambda2, 'lambda3': d.lambda3,
            'delta1': d.d1, 'delta2': d.d2, 'delta3': d.d3,
            'residual1': residuals[0], 'residual2': residuals[1], 'residual3': residuals[2]}], args)
    return 0


def cmd_hydrogenic(args: argparse.Namespace) -> int:
    if args.ratios:
        first, second = hyperfine_ratios(args.Z)
        _emit([{'Z': args.Z, 'ratio_qed': first, 'ratio_magnetic': second}], args)
        return 0
    if args.levels:
        cores = [tuple(_parse_core(item, 5)) for item in args.levels.split(';') if item.strip()]
        levels = hydrogen_level_table(args.Z, levels=cores)
        records = []
        for row_id, (core, delta) in enumerate(zip(cores, levels), start=1):
            n, l, m, J, _ = core
            reference = qed_energy(n, l, m, J, args.Z) - qed_energy(1, 0, 0, 0, args.Z)
            records.append(_level_record(row_id, core, delta, reference))
        _emit(records, args)
        return 0
    levels = hydrogen_level_table(args.Z)
    qed = dict(qed_level_table(args.Z))
    records = [_level_record(row_id, core, delta, qed.get(row_id))
               for row_id, (core, delta) in enumerate(zip(HYDROGEN_LEVELS, levels), start=1)]
    _emit(records, args)
    return 0


def _level_record(row_id: int, core: Sequence[int], computed: float,
                  reference: Optional[float]) -> Dict[str, Any]:
    error = (spectra_harness.error_rate(computed, reference, 'difference')
             if reference else None)
    return {'row_id': row_id, 'label': ','.join(str(v) for v in core),
            'computed': computed, 'reference': reference,
            'source': 'QED' if reference is not None else None, 'error_pct': error}


def cmd_qed(args: argparse.Namespace) -> int:
    records = []
    for row_id, value in qed_level_table(args.Z):
        numbers = QED_ROWS[row_id - 1]
        records.append({'row_id': row_id,
                        'label': '' if numbers is None else ','.join(str(v) for v in numbers),
                        'qed_delta': value, 'source': 'QED'})
    _emit(records, args)
    return 0


def cmd_integral(args: argparse.Namespace) -> int:
    orbitals = [_parse_orbital(item) for item in args.orbitals.split(';')]
    if len(orbitals) != 4:
        raise DomainError("нужно четыре орбитали a;b;c;e")
    if args.h:
        term = InteractionTerm(tuple(float(v) for v in args.h.split(',')))
    else:
        rows = interaction_rows(FunctionalMode.IMPROVED_VTHETA)
        if not 1 <= args.row <= len(rows):
            raise DomainError(f"номер строки V_θ вне 1..{len(rows)}")
        term = rows[args.row - 1]
    d = deltas_for(args.Z, args.functional_mode)
    value, path = coupling_with_path(*orbitals, term, d)
    oracle = coupling_oracle(*orbitals, term.h, d)
    difference = abs(value - oracle) / max(abs(oracle), 1e-300)
    _emit([{'computed': value, 'path': path, 'oracle': oracle, 'relative_difference': difference}], args)
    return 0


def cmd_energy(args: argparse.Namespace) -> int:
    config = load_configuration(args.config)
    report = evaluate(config, args.functional_mode)
    _emit([report.to_dict()], args)
    return 0


def cmd_minimize(args: argparse.Namespace) -> int:
    config = load_configuration(args.config)
    opts = MinimizeOptions(mode=args.functional_mode, xi_init=config.exponents,
                           restarts=args.restarts)
    result = minimize(config, opts)
    if args.format == 'json':
        _emit([result.to_dict()], args)
    else:
        record: Dict[str, Any] = {f"xi{k + 1}": x for k, x in enumerate(result.xi_star)}
        record.update({'energy': result.energy, 'evals': result.evals, 'converged': result.converged})
        _emit([record], args)
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    rows_subset = [int(v) for v in args.rows.split(',')] if args.rows else None
    opts = spectra_harness.HarnessOptions(
        optimize=args.optimize,
        rows=rows_subset,
        init=args.init,
        mode=args.functional_mode if args.mode else None,
        minimize=MinimizeOptions(restarts=args.restarts),
        references_path=args.ref or spectra_harness.REFERENCE_PATH,
    )
    rows = spectra_harness.reproduce_table(args.table_id, opts)
    if args.format == 'docx':
        if not args.out:
            raise DomainError("для формата docx нужен --out")
        worst, bound_ok = spectra_harness.headline_bound(rows)
        generate_table_report({
            'table_id': args.table_id,
            'rows': rows,
            'source': f"Эталонные уровни: {opts.references_path}",
            'method': _method_text(args.table_id, opts),
            'notes': f"Максимальная |ε| по строкам с эталоном: {worst:.4g} % "
                     f"({'в пределах' if bound_ok else 'вне'} 10.33 %).",
        }, args.out)
    elif args.format == 'json':
        _emit([asdict(row) for row in rows], args)
    elif args.out:
        spectra_harness.write_comparison_csv(rows, args.out)
    else:
        _emit([asdict(row) for row in rows], args)
    if not spectra_harness.tier1_passed(rows):
        logger.error("таблица %d: контрольные строки не воспроизведены", args.table_id)
        return 1
    return 0


def _method_text(table_id: int, opts: spectra_harness.HarnessOptions) -> str:
    if table_id in (2, 3):
        return 'Замкнутые формулы для водородоподобного иона с поправками δ; эталон — QED.'
    how = 'минимизация по ξ' if opts.optimize else 'функционал при напечатанных ξ'
    return f"Функционал энергии с попарной корреляцией ({how})."


def cmd_lamb(args: argparse.Namespace) -> int:
    report = spectra_harness.lamb_report(args.Z)
    reference = report.reference or (None, None)
    _emit([{'Z': args.Z, 'shift': 'dE2-dE1', 'computed': report.first, 'reference': reference[0]},
           {'Z': args.Z, 'shift': 'dE5-dE3', 'computed': report.second, 'reference': reference[1]}], args)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    levels = spectra_harness.load_reference(args.ref)
    counts: Dict[str, int] = {}
    for level in levels:
        counts[level.system] = counts.get(level.system, 0) + 1
    _emit([{'system': system, 'levels': count} for system, count in counts.items()], args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        description='Расчёт сверхтонкой структуры атомов и воспроизведение таблиц энергий.')
    parser.add_argument('--seed', type=int, default=None, help='Зерно случайных перезапусков')
    parser.add_argument('--tol', type=float, default=None,
                        help='Допуск минимизации по энергии и точность квадратур')
    parser.add_argument('--mode', choices=[m.value for m in FunctionalMode], default=None,
                        help='Режим гамильтониана')
    parser.add_argument('--out', default=None, help='Файл для вывода')
    parser.add_argument('--format', choices=['csv', 'json', 'docx'], default='csv', help='Формат вывода')
    parser.add_argument('--verbose', action='store_true', help='Подробный журнал (DEBUG)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('delta', help='Тройка δ и невязки опорных тождеств')
    p.add_argument('--Z', type=int, required=True)
    p.set_defaults(handler=cmd_delta)

    p = sub.add_parser('hydrogenic', help='Уровни водородоподобного иона')
    p.add_argument('--Z', type=int, required=True)
    p.add_argument('--levels', default=None, help="Орбитали 'n,l,m,J,P;…' (по умолчанию строки таблиц)")
    p.add_argument('--ratios', action='store_true', help='Отношения расщепления 2S-уровней')
    p.set_defaults(handler=cmd_hydrogenic)

    p = sub.add_parser('qed', help='Эталонные разности QED')
    p.add_argument('--Z', type=int, required=True)
    p.set_defaults(handler=cmd_qed)

    p = sub.add_parser('integral', help='Двухэлектронный интеграл: аналитика и квадратура')
    p.add_argument('--Z', type=int, required=True)
    p.add_argument('--orbitals', required=True, help="'n,l,m,J,P,xi;…' четыре орбитали a;b;c;e")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--row', type=int, help='Номер строки V_θ (1..11)')
    group.add_argument('--h', help='Явный описатель h1,…,h12')
    p.set_defaults(handler=cmd_integral)

    p = sub.add_parser('energy', help='Функционал энергии конфигурации')
    p.add_argument('--config', required=True)
    p.set_defaults(handler=cmd_energy)

    p = sub.add_parser('minimize', help='Минимизация энергии по ξ')
    p.add_argument('--config', required=True)
    p.add_argument('--restarts', type=int, default=None)
    p.set_defaults(handler=cmd_minimize)

    p = sub.add_parser('table', help='Воспроизведение таблицы 1..6')
    p.add_argument('table_id', type=int, choices=range(1, 7))
    p.add_argument('--optimize', action='store_true', help='Минимизировать вместо напечатанных ξ')
    p.add_argument('--rows', default=None, help='Номера строк через запятую')
    p.add_argument('--init', choices=['paper', 'screened'], default='paper')
    p.add_argument('--restarts', type=int, default=None)
    p.add_argument('--ref', default=None, help='CSV с эталонными уровнями')
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser('lamb', help='Лэмбовские сдвиги')
    p.add_argument('--Z', type=int, required=True)
    p.set_defaults(handler=cmd_lamb)

    p = sub.add_parser('validate', help='Проверка CSV с эталонными уровнями')
    p.add_argument('--ref', required=True)
    p.set_defaults(handler=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    if args.seed is not None:
        update_settings(seed=args.seed)
    if args.tol is not None:
        update_settings(tol_f=args.tol, oracle_tolerance=args.tol)
    default_mode = (FunctionalMode.IMPROVED_BARE if args.command == 'integral'
                    else FunctionalMode.IMPROVED_VTHETA)
    args.functional_mode = FunctionalMode(args.mode) if args.mode else default_mode
    if args.format == 'docx' and args.command != 'table':
        print("формат docx доступен только для команды table", file=sys.stderr)
        return 2
    try:
        return args.handler(args)
    except HyperfineError as exc:
        print(f"ошибка: {exc}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
