"""Минимизация функционала энергии по показателям орбиталей ξ.

Используется симплекс-метод Нелдера — Мида из SciPy с границами и
несколькими перезапусками: первый запуск стартует из ``xi_init``,
остальные — из копий, умноженных на случайный множитель 1 ± jitter.
Возвращается лучшая точка; при равенстве энергий — из запуска с
меньшим номером.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np
from scipy import optimize

from .delta_hydrogenic import effective_denominator
from .energy_functional import FunctionalMode, deltas_for, evaluate
from .errors import DomainError, HyperfineError
from .integral_engine import IntegralCache
from .quantum_model import Configuration, ensure_valid_configuration
from .settings import get_setting

logger = logging.getLogger(__name__)

SCREENING = 0.3


@dataclass
class MinimizeOptions:
    mode: FunctionalMode = FunctionalMode.IMPROVED_VTHETA
    xi_init: Optional[Tuple[float, ...]] = None
    xi_bounds: Optional[Tuple[Tuple[float, float], ...]] = None
    tol_f: Optional[float] = None
    tol_x: Optional[float] = None
    restarts: Optional[int] = None
    max_evals: Optional[int] = None
    seed: Optional[int] = None
    jitter: Optional[float] = None

    def resolved(self, c: Configuration) -> 'MinimizeOptions':
        """Копия, в которой пропущенные значения взяты из настроек и конфигурации."""
        bounds = self.xi_bounds or tuple((1e-3, 3.0 * c.Z) for _ in c.orbitals)
        xi_init = self.xi_init or default_initial_exponents(c, self.mode)
        options = MinimizeOptions(
            mode=self.mode,
            xi_init=tuple(float(x) for x in xi_init),
            xi_bounds=tuple((float(lo), float(hi)) for lo, hi in bounds),
            tol_f=get_setting('tol_f') if self.tol_f is None else self.tol_f,
            tol_x=get_setting('tol_x') if self.tol_x is None else self.tol_x,
            restarts=get_setting('restarts') if self.restarts is None else self.restarts,
            max_evals=get_setting('max_evals') if self.max_evals is None else self.max_evals,
            seed=get_setting('seed') if self.seed is None else self.seed,
            jitter=get_setting('jitter') if self.jitter is None else self.jitter,
        )
        options.validate(c)
        return options

    def validate(self, c: Configuration) -> None:
        if len(self.xi_init) != c.N or len(self.xi_bounds) != c.N:
            raise DomainError(f"ожидается {c.N} показателей и границ")
        for low, high in self.xi_bounds:
            if not 0 < low < high:
                raise DomainError(f"недопустимые границы ξ ({low}, {high})")
        if self.tol_f <= 0 or self.tol_x <= 0 or self.restarts < 1 or self.max_evals < 1:
            raise DomainError("допуски, число запусков и вычислений должны быть положительны")


@dataclass
class MinimizeResult:
    xi_star: Tuple[float, ...]
    energy: float
    evals: int
    converged: bool
    history: List[float] = field(default_factory=list)
    restart_energies: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'xi_star': list(self.xi_star),
            'energy': self.energy,
            'evals': self.evals,
            'converged': self.converged,
            'history': list(self.history),
            'restart_energies': list(self.restart_energies),
        }


def screened_count(c: Configuration, index: int) -> int:
    """Число электронов, экранирующих орбиталь ``index``."""
    n_i = c.orbitals[index].n
    return sum(1 for j, o in enumerate(c.orbitals)
               if j != index and (o.n < n_i or (o.n == n_i and j < index)))


def default_initial_exponents(c: Configuration,
                              mode: FunctionalMode = FunctionalMode.IMPROVED_VTHETA) -> Tuple[float, ...]:
    """Собственные показатели с эффективным зарядом Z − 0.3·(число экранирующих)."""
    d = deltas_for(c.Z, mode)
    exponents = []
    for index, o in enumerate(c.orbitals):
        z_eff = max(c.Z - SCREENING * screened_count(c, index), 0.1)
        exponents.append(z_eff / effective_denominator(o, d))
    return tuple(exponents)


class _Objective:
    """Функционал с подсчётом вызовов и историей лучшего значения."""

    def __init__(self, c: Configuration, mode: FunctionalMode, bounds: Sequence[Tuple[float, float]],
                 cache: Optional[IntegralCache]) -> None:
        self.c = c
        self.mode = mode
        self.low = np.array([lo for lo, _ in bounds])
        self.high = np.array([hi for _, hi in bounds])
        self.cache = cache
        self.evals = 0
        self.best = np.inf
        self.best_x: Optional[np.ndarray] = None
        self.history: List[float] = []

    def __call__(self, x: np.ndarray) -> float:
        clipped = np.clip(x, self.low, self.high)
        self.evals += 1
        energy = evaluate(self.c.with_exponents(tuple(clipped)), self.mode, self.cache).W
        if energy < self.best:
            self.best = energy
            self.best_x = clipped.copy()
        self.history.append(float(self.best))
        return energy


def _run_converged(result: optimize.OptimizeResult, opts: MinimizeOptions) -> bool:
    """Запуск сошёлся: SciPy сообщает успех, и итоговый симплекс уже допусков."""
    if not result.success:
        return False
    simplex, values = result.final_simplex
    spread_x = float(np.max(np.abs(simplex[1:] - simplex[0]))) if len(simplex) > 1 else 0.0
    spread_f = float(np.max(np.abs(values[1:] - values[0]))) if len(values) > 1 else 0.0
    return spread_x <= opts.tol_x and spread_f <= opts.tol_f


def minimize(c: Configuration, opts: Optional[MinimizeOptions] = None,
             cache: Optional[IntegralCache] = None) -> MinimizeResult:
    """Минимизирует W по ξ.

    :param c: шаблон конфигурации; без ``xi_init`` старт из экранированных показателей
    :param opts: параметры поиска
    :param cache: кэш интегралов
    :return: лучшая найденная точка; ``converged`` — сошёлся ли запуск с лучшей энергией
    """
    ensure_valid_configuration(c)
    opts = (opts or MinimizeOptions()).resolved(c)
    objective = _Objective(c, opts.mode, opts.xi_bounds, cache)
    rng = np.random.default_rng(opts.seed)
    start = np.array(opts.xi_init)
    budget = opts.max_evals
    converged = False
    restart_energies: List[float] = []
    best_index = -1
    best_energy = np.inf
    for run in range(opts.restarts):
        x0 = start if run == 0 else start * (1 + rng.uniform(-opts.jitter, opts.jitter, start.size))
        x0 = np.clip(x0, objective.low, objective.high)
        remaining = budget - objective.evals
        if remaining <= 0:
            logger.warning("исчерпан бюджет вычислений перед запуском %d", run)
            break
        result = optimize.minimize(objective, x0, method='Nelder-Mead',
                                   bounds=list(opts.xi_bounds),
                                   options={'fatol': opts.tol_f, 'xatol': opts.tol_x,
                                            'maxfev': remaining, 'adaptive': c.N > 2})
        restart_energies.append(float(result.fun))
        logger.debug("запуск %d: E = %.10f при ξ = %s (%s)", run, result.fun, result.x, result.message)
        if result.fun < best_energy:
            best_energy = float(result.fun)
            best_index = run
            converged = _run_converged(result, opts)
    if objective.best_x is None:
        raise HyperfineError("функционал ни разу не вычислен")
    if not converged:
        logger.warning("минимизация не сошлась, возвращается лучшая точка E = %.10f", objective.best)
    logger.debug("лучший запуск %d", best_index)
    return MinimizeResult(
        xi_star=tuple(float(x) for x in objective.best_x),
        energy=float(objective.best),
        evals=objective.evals,
        converged=converged,
        history=objective.history,
        restart_energies=restart_energies,
    )


@dataclass
class ScanRow:
    label: str
    result: Optional[MinimizeResult]
    delta_e: Optional[float]
    error: Optional[str] = None


def excited_scan(templates: Sequence[Configuration], opts: Optional[MinimizeOptions] = None,
                 labels: Optional[Sequence[str]] = None,
                 cache: Optional[IntegralCache] = None) -> List[ScanRow]:
    """Минимизирует каждую конфигурацию и считает ΔE относительно первой.

    Ошибка в строке записывается в ``ScanRow.error``, сканирование продолжается.
    Если основное состояние не вычислено, у остальных строк ``delta_e`` пуст,
    а в ``error`` указана причина.

    :param templates: конфигурации; первая — основное состояние
    :param opts: общие параметры поиска; старт каждой строки — её собственные ξ
    :param labels: подписи строк
    :return: строки в исходном порядке
    """
    if not templates:
        return []
    if len({c.Z for c in templates}) != 1:
        raise DomainError("все конфигурации сканирования должны иметь один Z")
    base = opts or MinimizeOptions()
    labels = list(labels) if labels is not None else [str(k + 1) for k in range(len(templates))]
    rows: List[ScanRow] = []
    ground: Optional[float] = None
    ground_error: Optional[str] = None
    for index, (label, template) in enumerate(zip(labels, templates)):
        row_opts = MinimizeOptions(mode=base.mode, tol_f=base.tol_f, tol_x=base.tol_x,
                                   restarts=base.restarts, max_evals=base.max_evals,
                                   seed=base.seed, jitter=base.jitter,
                                   xi_init=template.exponents, xi_bounds=base.xi_bounds)
        try:
            result = minimize(template, row_opts, cache)
        except HyperfineError as exc:
            logger.warning("строка %s: %s", label, exc)
            rows.append(ScanRow(label, None, None, str(exc)))
            if index == 0:
                ground_error = str(exc)
            continue
        if index == 0:
            ground = result.energy
        if not result.converged:
            logger.warning("строка %s: минимизация не сошлась", label)
        error = None if result.converged else 'не сошлось'
        if ground is None and index > 0:
            logger.error("строка %s: нет основного состояния (%s)", label, ground_error)
            error = f"нет основного состояния: {ground_error}"
        delta = None if ground is None else result.energy - ground
        rows.append(ScanRow(label, result, delta, error))
    return rows
