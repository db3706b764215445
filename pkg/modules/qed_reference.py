"""Эталонные энергии водородоподобных ионов: Дирак, Лэмб, магнитный член.

Энергия QED складывается из энергии Дирака и двух поправок, выраженных
через сдвиги Лэмба Δ1S и Δ2S. Все значения в хартри. Модуль служит
базой сравнения для таблиц сверхтонкой структуры H и U⁹¹⁺.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple
import math

from .errors import DomainError
from .quantum_model import CONSTS, PhysConsts

# Соответствие строк таблиц сверхтонкой структуры уровням (n, l, m, J);
# у девятой строки эталона нет.
QED_ROWS: Tuple[Optional[Tuple[int, int, int, int]], ...] = (
    (1, 0, 0, 0),
    (1, 0, 0, 1),
    (2, 0, 0, 0),
    (2, 0, 0, 1),
    (2, 1, 0, 0),
    (2, 1, 0, 1),
    (2, 1, 1, 0),
    (2, 1, 1, 1),
    None,
)


@dataclass(frozen=True)
class QedLevel:
    n: int
    l: int
    m: int
    J: int
    Z: int
    energy: float


def _check_numbers(n: int, l: int, m: int = 0, J: int = 0) -> None:
    if n < 1 or not 0 <= l <= n - 1 or abs(m) > l or J not in (0, 1):
        raise DomainError(f"недопустимые квантовые числа (n={n}, l={l}, m={m}, J={J})")


def dirac_energy(n: int, l: int, Z: int, consts: PhysConsts = CONSTS) -> float:
    """Энергия Дирака водородоподобного иона без энергии покоя.

    Формула переписана так, чтобы не вычитать близкие величины:
    (ratio − 1)/α² = −Z²/(√Q·(n_r + γ + √Q)), где γ = √((l+1)² − (αZ)²),
    Q = n_r² + (l+1)² + 2n_rγ, n_r = n − l − 1.

    :param n: главное квантовое число
    :param l: орбитальное квантовое число
    :param Z: заряд ядра
    :return: энергия в хартри
    """
    _check_numbers(n, l)
    az = consts.alpha * Z
    radicand = (l + 1) ** 2 - az ** 2
    if radicand <= 0:
        raise DomainError(f"(l+1)² ≤ (αZ)² для l={l}, Z={Z}")
    gamma = math.sqrt(radicand)
    n_r = n - l - 1
    root_q = math.sqrt(n_r ** 2 + (l + 1) ** 2 + 2 * n_r * gamma)
    return -Z ** 2 / (root_q * (n_r + gamma + root_q))


def lamb_term(n: int, l: int, J: int, Z: int, consts: PhysConsts = CONSTS) -> float:
    """Лэмбовская поправка: отлична от нуля только для n > 1, l = 0."""
    if n > 1 and l == 0:
        return 4 * (1 - (-1) ** J) * consts.delta2S * Z ** 4 / n ** 3
    return 0.0


def magnetic_term(n: int, l: int, m: int, J: int, Z: int,
                  consts: PhysConsts = CONSTS) -> float:
    """Магнитная поправка; первая ветвь при l = 0 или нечётном m.

    :return: поправка в хартри
    """
    sign = (-1) ** J
    if l == 0 or m % 2 != 0:
        numerator = (2 * l - sign + 1) * (2 * l - sign + 3) - (2 * l + 1) * (2 * l + 3) - 3
        denominator = 8 * (2 * l + 3) * (2 * l + 1) ** 2 * n ** 3
    else:
        numerator = (2 * l - sign - 1) * (2 * l - sign + 1) - (2 * l - 1) * (2 * l + 1) - 3
        denominator = 8 * (2 * l - 1) * (2 * l + 1) ** 2 * n ** 3
    return 3 * consts.delta1S * numerator * Z ** 3 / denominator


def qed_energy(n: int, l: int, m: int, J: int, Z: int, consts: PhysConsts = CONSTS) -> float:
    """Полная энергия QED: E_D + E_L + E_M."""
    _check_numbers(n, l, m, J)
    return (dirac_energy(n, l, Z, consts) + lamb_term(n, l, J, Z, consts)
            + magnetic_term(n, l, m, J, Z, consts))


def qed_level(n: int, l: int, m: int, J: int, Z: int, consts: PhysConsts = CONSTS) -> QedLevel:
    return QedLevel(n, l, m, J, Z, qed_energy(n, l, m, J, Z, consts))


def qed_delta(n: int, l: int, m: int, J: int, Z: int, consts: PhysConsts = CONSTS) -> float:
    """Разность с основным уровнем (1, 0, 0, 0)."""
    return qed_energy(n, l, m, J, Z, consts) - qed_energy(1, 0, 0, 0, Z, consts)


def qed_level_table(Z: int, consts: PhysConsts = CONSTS) -> List[Tuple[int, Optional[float]]]:
    """ΔE^QED для девяти строк таблиц сверхтонкой структуры.

    :param Z: заряд ядра
    :return: список (номер строки, ΔE или None)
    """
    rows: List[Tuple[int, Optional[float]]] = []
    for row_id, numbers in enumerate(QED_ROWS, start=1):
        rows.append((row_id, None if numbers is None else qed_delta(*numbers, Z, consts)))
    return rows
