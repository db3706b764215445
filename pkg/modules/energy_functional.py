"""Функционал энергии W = (1/A)·Σ⟨Ψ|H_i|Ψ⟩ для пробной функции с попарной корреляцией.

Порядок вычислений повторяет исходный алгоритм: матрицы перекрывания u
и ядерного притяжения V, цикл по парам пар (i1 < j1) × (i2 < j2) с
множителями v1, v2, v3, накопление нормы A, потенциальной энергии
через v4 = ξ·D − Z и отталкивания X через интегралы I_II. Индексы
ведутся с нуля.

Отталкивание пары электронов (a, b) между слагаемыми Ψ записывается
через назначения орбиталей электронам: у бра и кета электрон k несёт
орбиталь bra[k] и ket[k], остальные электроны дают множители u, а
пара (a, b) даёт I_II. Взаимодействие симметризуется по обмену
электронов, поэтому X не зависит от порядка орбиталей.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple
import logging
import math

import numpy as np

from .delta_hydrogenic import DeltaTriple, effective_denominator, solve_deltas, solve_orbital, zero_deltas
from .errors import ZeroNormError
from .integral_engine import (DEFAULT_CACHE, QUADRATURE, IntegralCache, InteractionTerm,
                              coupling_with_path, nuclear, overlap)
from .quadrature import orbital_norm, orbital_overlap
from .quantum_model import Configuration, Orbital, ensure_valid_configuration, ensure_valid_orbital
from .settings import get_setting

logger = logging.getLogger(__name__)

# Подобранные константы потенциала V_θ.
ETA = (0.47883387, -0.01397390, 0.00769582, 0.00000713, 0.00231748, 0.01837402, -0.1701)


class FunctionalMode(Enum):
    IMPROVED_VTHETA = 'improved-vtheta'
    IMPROVED_BARE = 'improved-bare'
    SCHRODINGER_BARE = 'schrodinger-bare'

    @property
    def uses_deltas(self) -> bool:
        return self is not FunctionalMode.SCHRODINGER_BARE


def _row(amplitude: float, r1: int, r2: int, r12: int, **angular: int) -> InteractionTerm:
    names = ('h5', 'h6', 'h7', 'h8', 'h9', 'h10', 'h11', 'h12')
    return InteractionTerm((amplitude, r1, r2, r12) + tuple(angular.get(n, 0) for n in names))


def interaction_rows(mode: FunctionalMode) -> List[InteractionTerm]:
    """Строки описателей взаимодействия для режима.

    :param mode: режим гамильтониана
    :return: 11 строк V_θ или одна строка 0.5/r12
    """
    if mode is not FunctionalMode.IMPROVED_VTHETA:
        return [_row(0.5, 0, 0, -1)]
    eta1, eta2, eta3, eta4, eta5, eta6, eta7 = ETA
    return [
        _row(eta1, 0, 0, -1),
        _row(eta2, -1, -1, 1),
        _row(eta3, -1, 1, -1),
        _row(eta3, 1, -1, -1),
        _row(eta4, -1, -2, 2),
        _row(eta5, -1, 0, -1),
        _row(eta5, 0, -1, -1),
        _row(eta6, 1, 1, -1),
        _row(eta7, -1, -1, 0, h5=1, h6=1),
        _row(eta7, -1, -1, 0, h7=1, h8=1, h9=1, h10=1),
        _row(eta7, -1, -1, 0, h7=1, h8=1, h11=1, h12=1),
    ]


@dataclass
class FunctionalReport:
    W: float
    A: float
    X: float
    potential: float
    mode: FunctionalMode
    pair_breakdown: Dict[Tuple[int, int], float] = field(default_factory=dict)
    cache_stats: Dict[str, int] = field(default_factory=dict)
    used_quadrature: bool = False
    exponent_rounding: float = 0.0

    def to_dict(self) -> dict:
        return {
            'W': self.W,
            'A': self.A,
            'X': self.X,
            'potential': self.potential,
            'mode': self.mode.value,
            'pair_breakdown': {f"{i + 1}-{j + 1}": v for (i, j), v in self.pair_breakdown.items()},
            'cache': dict(self.cache_stats),
            'used_quadrature': self.used_quadrature,
            'exponent_rounding': self.exponent_rounding,
        }


def deltas_for(Z: int, mode: FunctionalMode) -> DeltaTriple:
    return solve_deltas(Z) if mode.uses_deltas else zero_deltas(Z)


def _v4(o: Orbital, Z: int, d: DeltaTriple) -> float:
    return o.xi * effective_denominator(o, d) - Z


def _symmetrized(rows: List[InteractionTerm]) -> List[InteractionTerm]:
    """Строки, замкнутые относительно обмена электронов 1 ↔ 2.

    Строка без пары делится на две половины: h и h после обмена.
    """
    result: List[InteractionTerm] = []
    for row in rows:
        partner = row.swapped()
        if partner == row or partner in rows:
            result.append(row)
        else:
            half = InteractionTerm((row.amplitude / 2,) + row.h[1:])
            result.extend((half, half.swapped()))
    return result


def _transposition(pair: Tuple[int, int], size: int) -> Tuple[int, ...]:
    order = list(range(size))
    i, j = pair
    order[i], order[j] = j, i
    return tuple(order)


def _exponent_rounding(c: Configuration, d: DeltaTriple) -> float:
    """Наибольшее отклонение показателей cos θ и sin θ орбиталей от целых."""
    worst = 0.0
    for o in c.orbitals:
        solution = solve_orbital(o, c.Z, d, xi=o.xi)
        for value in (solution.T, solution.sin_power):
            worst = max(worst, abs(value - round(value)))
    return worst


class _Functional:
    """Состояние одного вычисления: матрицы u, V и интегралы I_II."""

    def __init__(self, c: Configuration, mode: FunctionalMode, cache: IntegralCache) -> None:
        self.c = c
        self.mode = mode
        self.cache = cache
        self.d = deltas_for(c.Z, mode)
        self.rows = _symmetrized(interaction_rows(mode))
        self.tolerance = get_setting('functional_integer_tolerance')
        self.rounding = _exponent_rounding(c, self.d)
        if self.rounding > get_setting('integer_tolerance'):
            logger.debug("показатели второго электрона округляются на %.1e (допуск %.0e)",
                         2 * self.rounding, self.tolerance)
        self.used_quadrature = False
        self._sums: Dict[Tuple[int, int, int, int], float] = {}
        size = c.N
        self.u = np.empty((size, size))
        self.V = np.empty((size, size))
        for i, a in enumerate(c.orbitals):
            for j, b in enumerate(c.orbitals):
                self.u[i, j] = overlap(a, b, self.d)
                self.V[i, j] = nuclear(a, b, self.d)
        self._check_symmetry()

    def _check_symmetry(self) -> None:
        threshold = get_setting('overlap_zero_threshold')
        for i in range(self.c.N):
            for j in range(i + 1, self.c.N):
                if self.c.symmetry[i][j] == 0 and abs(self.u[i, j]) >= threshold:
                    logger.warning("S[%d][%d] = 0, но |u| = %.3e ≥ %.0e",
                                   i + 1, j + 1, abs(self.u[i, j]), threshold)

    def I(self, a: int, b: int, c: int, e: int) -> float:
        """Σ_k I_II(a, b, c, e; h_k) по всем строкам взаимодействия."""
        key = (a, b, c, e)
        if key in self._sums:
            return self._sums[key]
        orbitals = self.c.orbitals
        total = 0.0
        for term in self.rows:
            value, path = coupling_with_path(orbitals[a], orbitals[b], orbitals[c], orbitals[e],
                                             term, self.d, self.tolerance, self.cache)
            if path == QUADRATURE:
                self.used_quadrature = True
            total += value
        self._sums[key] = total
        return total

    def element(self, bra: Tuple[int, ...], ket: Tuple[int, ...], a: int, b: int) -> float:
        """⟨bra| g_ab |ket⟩ для произведений орбиталей с назначениями bra и ket.

        :param bra: bra[k] — номер орбитали электрона k в бра
        :param ket: ket[k] — номер орбитали электрона k в кете
        :param a: первый электрон пары
        :param b: второй электрон пары
        """
        weight = 1.0
        for k in range(self.c.N):
            if k != a and k != b:
                weight *= self.u[bra[k], ket[k]]
        if weight == 0.0:
            return 0.0
        return weight * self.I(bra[a], ket[a], bra[b], ket[b])


def _norm_term(u: np.ndarray, v1: float, v2: float, v3: float,
               i1: int, j1: int, i2: int, j2: int) -> float:
    value = 1 + v1 * u[i2, j2] ** 2 + v2 * u[i1, j1] ** 2
    if i2 == i1 and j2 == j1:
        value += v3
    elif i2 == i1 and j2 != j1:
        value += v3 * u[j1, j2] * u[i1, j1] * u[i1, j2]
    elif i2 == j1:
        value += v3 * u[i1, j1] * u[i1, j2] * u[j1, j2]
    elif j2 == i1:
        value += v3 * u[j1, i2] * u[i1, j1] * u[i2, i1]
    elif j2 == j1:
        value += v3 * u[j1, i1] * u[i1, i2] * u[i2, j1]
    else:
        value += v3 * u[i1, j1] ** 2 * u[i2, j2] ** 2
    return value


def _potential_term(u: np.ndarray, V: np.ndarray, v1: float, v2: float, v3: float, v4: float,
                    i1: int, j1: int, i2: int, j2: int, i3: int) -> float:
    w = v4 * V[i3, i3]
    if i3 in (i2, j2):
        w += v1 * v4 * u[i2, j2] * V[i2, j2]
    else:
        w += v1 * v4 * u[i2, j2] ** 2 * V[i3, i3]
    if i3 in (i1, j1):
        w += v2 * v4 * u[i1, j1] * V[i1, j1]
    else:
        w += v2 * v4 * u[i1, j1] ** 2 * V[i3, i3]

    k = v3 * v4
    if i2 == i1:
        if j2 == j1:
            w += k * V[i3, i3]
        elif i3 == i1:
            w += k * u[i1, j1] * u[j1, j2] * V[i3, j2]
        elif i3 == j1:
            w += k * u[j1, j2] * u[i1, j2] * V[i3, i1]
        elif i3 == j2:
            w += k * u[i1, j1] * u[i1, j2] * V[i3, j1]
        else:
            w += k * u[i1, j1] * u[i1, j2] * u[j1, j2] * V[i3, i3]
    elif i2 == j1:
        if i3 == i1:
            w += k * u[i1, j2] * u[j1, j2] * V[i3, j1]
        elif i3 == j1:
            w += k * u[i1, j1] * u[i1, j2] * V[i3, j2]
        elif i3 == j2:
            w += k * u[i1, j1] * u[j1, j2] * V[i3, i1]
        else:
            w += k * u[i1, j1] * u[i1, j2] * u[j1, j2] * V[i3, i3]
    elif j2 == i1:
        if i3 == i1:
            w += k * u[i1, j1] * u[j1, i2] * V[i3, i2]
        elif i3 == j1:
            w += k * u[i2, j1] * u[i1, i2] * V[i3, i1]
        elif i3 == i2:
            w += k * u[i1, j1] * u[i1, i2] * V[i3, j1]
        else:
            w += k * u[i1, j1] * u[i1, i2] * u[j1, i2] * V[i3, i3]
    elif j2 == j1:
        if i3 == i1:
            w += k * u[i2, j1] * u[i1, i2] * V[i3, j1]
        elif i3 == j1:
            w += k * u[i1, j1] * u[i1, i2] * V[i3, i2]
        elif i3 == i2:
            w += k * u[i1, j1] * u[j1, i2] * V[i3, i1]
        else:
            w += k * u[i1, j1] * u[i1, i2] * u[j1, i2] * V[i3, i3]
    else:
        if i3 == i1:
            w += k * u[i1, j1] * u[i2, j2] ** 2 * V[i3, j1]
        elif i3 == j1:
            w += k * u[i1, j1] * u[i2, j2] ** 2 * V[i3, i1]
        elif i3 == i2:
            w += k * u[i1, j1] ** 2 * u[j2, i2] * V[i3, j2]
        elif i3 == j2:
            w += k * u[i1, j1] ** 2 * u[j2, i2] * V[i3, i2]
        else:
            w += k * u[i1, j1] ** 2 * u[i2, j2] ** 2 * V[i3, i3]
    return w


def evaluate(c: Configuration, mode: FunctionalMode = FunctionalMode.IMPROVED_VTHETA,
             cache: Optional[IntegralCache] = None) -> FunctionalReport:
    """Вычисляет функционал энергии конфигурации.

    :param c: конфигурация с N ≥ 2 (для N = 1 вызывается :func:`evaluate_single`)
    :param mode: режим гамильтониана
    :param cache: кэш интегралов; по умолчанию общий
    :return: отчёт с W, A, X и разбиением X по парам электронов
    """
    ensure_valid_configuration(c)
    cache = DEFAULT_CACHE if cache is None else cache
    if c.N == 1:
        energy = evaluate_single(c.orbitals[0], c.Z, mode)
        return FunctionalReport(energy, 1.0, 0.0, energy, mode, cache_stats=cache.stats())
    f = _Functional(c, mode, cache)
    u, V, S = f.u, f.V, c.symmetry
    v4 = [_v4(o, c.Z, f.d) for o in c.orbitals]
    pairs = [(i, j) for i in range(c.N - 1) for j in range(i + 1, c.N)]
    identity = tuple(range(c.N))
    swaps = {pair: _transposition(pair, c.N) for pair in pairs}

    A = 0.0
    W = 0.0
    X = 0.0
    breakdown: Dict[Tuple[int, int], float] = {pair: 0.0 for pair in pairs}
    for i1, j1 in pairs:
        for i2, j2 in pairs:
            v1 = -(-1) ** S[i2][j2]
            v2 = -(-1) ** S[i1][j1]
            v3 = (-1) ** (S[i1][j1] + S[i2][j2])
            A += _norm_term(u, v1, v2, v3, i1, j1, i2, j2)
            for i3 in range(c.N):
                W += _potential_term(u, V, v1, v2, v3, v4[i3], i1, j1, i2, j2, i3)
            terms = ((1.0, identity, identity), (v1, identity, swaps[(i2, j2)]),
                     (v2, swaps[(i1, j1)], identity), (v3, swaps[(i1, j1)], swaps[(i2, j2)]))
            for i3, j3 in pairs:
                contribution = sum(k * f.element(bra, ket, i3, j3) for k, bra, ket in terms)
                breakdown[(i3, j3)] += contribution
                X += contribution

    if A < get_setting('zero_norm_threshold'):
        raise ZeroNormError(f"норма пробной функции A = {A:.3e}")
    potential = W
    W = (W + 2 * X) / A
    W -= sum(o.xi ** 2 for o in c.orbitals) / 2
    logger.debug("W = %.12g, A = %.6g, X = %.6g (%s)", W, A, X, mode.value)
    return FunctionalReport(W, A, X, potential, mode, breakdown, cache.stats(), f.used_quadrature,
                            f.rounding)


def evaluate_single(o: Orbital, Z: int, mode: FunctionalMode = FunctionalMode.IMPROVED_BARE) -> float:
    """Энергия одноэлектронной системы: −ξ²/2 + (ξ·D − Z)·⟨φ|1/r|φ⟩."""
    ensure_valid_orbital(o)
    d = deltas_for(Z, mode)
    return -0.5 * o.xi ** 2 + _v4(o, Z, d) * nuclear(o, o, d)


def norm_by_quadrature(c: Configuration, mode: FunctionalMode = FunctionalMode.IMPROVED_BARE) -> float:
    """⟨Ψ|Ψ⟩ двухэлектронной конфигурации, посчитанное квадратурами.

    Для Ψ = φa(1)φb(2) ± φb(1)φa(2) норма равна 2 ± 2u², где u
    получается отдельной гауссовой квадратурой произведения φa·φb.

    :param c: конфигурация с N = 2
    :param mode: режим (определяет тройку δ)
    :return: A в нормировке функционала
    """
    if c.N != 2:
        raise ValueError("прямая норма реализована только для N = 2")
    d = deltas_for(c.Z, mode)
    a, b = c.orbitals
    sa = solve_orbital(a, c.Z, d, xi=a.xi)
    sb = solve_orbital(b, c.Z, d, xi=b.xi)
    cross = orbital_overlap(sa, sb)
    u = cross / math.sqrt(orbital_norm(sa) * orbital_norm(sb))
    sign = 1 if c.symmetry[0][1] == 1 else -1
    return 2 + 2 * sign * u ** 2
