"""Физические константы, квантовые числа и электронные конфигурации.

Модуль задаёт неизменяемые типы, которыми пользуются все остальные
модули: орбиталь ``(n, l, m, J, P; ξ)`` и конфигурацию ``(Z, орбитали,
матрица симметрии S)``. Проверки возвращают список нарушений, а не
бросают исключения, поэтому их можно вызывать в любом месте.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

from .errors import ConfigurationFormatError, DomainError

logger = logging.getLogger(__name__)

ALPHA = 1.0 / 137.036
LAMB_1S_FACTOR = 0.5556
LAMB_2S_FACTOR = 0.4138


@dataclass(frozen=True)
class PhysConsts:
    """Постоянная тонкой структуры и сдвиги Лэмба 1S/2S (в хартри).

    Сдвиги всегда пересчитываются из ``alpha``.
    """

    alpha: float = ALPHA

    @property
    def delta1S(self) -> float:
        return LAMB_1S_FACTOR * self.alpha ** 3

    @property
    def delta2S(self) -> float:
        return LAMB_2S_FACTOR * self.alpha ** 3


CONSTS = PhysConsts()

Core = Tuple[int, int, int, int, int]


@dataclass(frozen=True)
class Orbital:
    """Одноэлектронная орбиталь (n, l, m, J, P) с эффективным показателем ξ."""

    n: int
    l: int
    m: int
    J: int
    P: int
    xi: float = 1.0

    @property
    def core(self) -> Core:
        return (self.n, self.l, self.m, self.J, self.P)

    def with_xi(self, xi: float) -> 'Orbital':
        return replace(self, xi=float(xi))

    def label(self) -> str:
        return ','.join(str(q) for q in self.core)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def validate_orbital(o: Orbital) -> List[str]:
    """Проверяет инварианты орбитали.

    :param o: орбиталь
    :return: список нарушений; пустой список означает корректную орбиталь
    """
    violations: List[str] = []
    for name in ('n', 'l', 'm', 'J', 'P'):
        if not _is_int(getattr(o, name)):
            violations.append(f"{name} должно быть целым")
    if violations:
        return violations
    if o.n < 1:
        violations.append("n ≥ 1")
    if not 0 <= o.l <= o.n - 1:
        violations.append("0 ≤ l ≤ n−1")
    if abs(o.m) > o.l:
        violations.append("|m| ≤ l")
    if o.J not in (0, 1):
        violations.append("J ∈ {0,1}")
    if o.P not in (0, 1):
        violations.append("P ∈ {0,1}")
    if o.m != 0 and o.P != 1:
        violations.append("P must be 1 when m≠0")
    if not (isinstance(o.xi, (int, float)) and math.isfinite(o.xi) and o.xi > 0):
        violations.append("ξ > 0")
    return violations


@dataclass(frozen=True)
class Configuration:
    """Электронная конфигурация: заряд ядра, орбитали и коэффициенты S."""

    Z: int
    orbitals: Tuple[Orbital, ...]
    symmetry: Tuple[Tuple[int, ...], ...] = field(default=())

    @classmethod
    def build(cls, Z: int, orbitals: Sequence[Orbital],
              overrides: Optional[Dict[Tuple[int, int], int]] = None) -> 'Configuration':
        """Создаёт конфигурацию с S = 1 везде, кроме ``overrides``.

        :param Z: заряд ядра
        :param orbitals: орбитали в порядке электронов
        :param overrides: словарь {(i, j): S} с индексами от нуля
        """
        size = len(orbitals)
        matrix = [[1] * size for _ in range(size)]
        for (i, j), value in (overrides or {}).items():
            matrix[i][j] = value
            matrix[j][i] = value
        return cls(Z, tuple(orbitals), tuple(tuple(row) for row in matrix))

    @property
    def N(self) -> int:
        return len(self.orbitals)

    @property
    def exponents(self) -> Tuple[float, ...]:
        return tuple(o.xi for o in self.orbitals)

    def with_exponents(self, xi: Sequence[float]) -> 'Configuration':
        if len(xi) != self.N:
            raise DomainError(f"ожидается {self.N} показателей, получено {len(xi)}")
        return replace(self, orbitals=tuple(o.with_xi(x) for o, x in zip(self.orbitals, xi)))


def permuted(c: Configuration, order: Sequence[int]) -> Configuration:
    """Переставляет орбитали и согласованно матрицу симметрии."""
    orbitals = tuple(c.orbitals[k] for k in order)
    matrix = tuple(tuple(c.symmetry[a][b] for b in order) for a in order)
    return Configuration(c.Z, orbitals, matrix)


def validate_configuration(c: Configuration) -> List[str]:
    """Проверяет конфигурацию целиком.

    :param c: конфигурация
    :return: список нарушений (пустой, если всё корректно)
    """
    violations: List[str] = []
    if not _is_int(c.Z) or c.Z < 1:
        violations.append("Z ≥ 1")
    if c.N < 1:
        violations.append("N ≥ 1")
    for index, orbital in enumerate(c.orbitals):
        violations.extend(f"орбиталь {index + 1}: {v}" for v in validate_orbital(orbital))
    if len(c.symmetry) != c.N or any(len(row) != c.N for row in c.symmetry):
        violations.append("матрица S должна быть размера N×N")
        return violations
    for i in range(c.N):
        for j in range(i + 1, c.N):
            if c.symmetry[i][j] != c.symmetry[j][i]:
                violations.append(f"S[{i + 1}][{j + 1}] ≠ S[{j + 1}][{i + 1}]")
            if c.symmetry[i][j] not in (0, 1):
                violations.append(f"S[{i + 1}][{j + 1}] ∈ {{0,1}}")
            if c.symmetry[i][j] == 0 and c.orbitals[i] == c.orbitals[j]:
                violations.append(f"zero-norm: одинаковые орбитали {i + 1} и {j + 1} при S=0")
    return violations


def ensure_valid_orbital(o: Orbital) -> None:
    violations = validate_orbital(o)
    if violations:
        raise DomainError(f"орбиталь {o}: " + '; '.join(violations))


def ensure_valid_configuration(c: Configuration) -> None:
    violations = validate_configuration(c)
    if violations:
        raise DomainError('; '.join(violations))


def orthogonality_hint(a: Orbital, b: Orbital, symmetry: int) -> bool:
    """Признак пары орбиталей, для которой перекрывание считается близким к нулю.

    Используется только как подсказка при выборе S: настоящее
    перекрывание всегда вычисляется аналитически.

    :param a: первая орбиталь
    :param b: вторая орбиталь
    :param symmetry: коэффициент S для пары
    :return: True, если S = 0 и выполнено неравенство |…| < 3
    """
    if symmetry != 0:
        return False
    shell_a = (a.n + a.J - 1) * (a.n + a.J)
    shell_b = (b.n + b.J - 1) * (b.n + b.J)
    return abs((shell_a - shell_b) / 2 + a.l + a.J - b.l - b.J) < 3


def parse_configuration(text: str) -> Configuration:
    """Разбирает текстовое описание конфигурации.

    Формат: строка ``Z z``; по строке ``n l m J P xi`` на орбиталь;
    строки ``S i j v`` (индексы с единицы) переопределяют симметрию;
    ``#`` начинает комментарий.

    :param text: содержимое файла
    :return: проверенная конфигурация
    """
    Z: Optional[int] = None
    orbitals: List[Orbital] = []
    overrides: List[Tuple[int, int, int, int]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0].upper() == 'Z':
                if len(parts) != 2:
                    raise ConfigurationFormatError("ожидается 'Z z'", line_number)
                Z = int(parts[1])
            elif parts[0].upper() == 'S':
                if len(parts) != 4:
                    raise ConfigurationFormatError("ожидается 'S i j v'", line_number)
                i, j, value = (int(p) for p in parts[1:])
                overrides.append((i, j, value, line_number))
            else:
                if len(parts) != 6:
                    raise ConfigurationFormatError("ожидается 'n l m J P xi'", line_number)
                n, l, m, J, P = (int(p) for p in parts[:5])
                orbitals.append(Orbital(n, l, m, J, P, float(parts[5])))
        except ValueError as exc:
            if isinstance(exc, ConfigurationFormatError):
                raise
            raise ConfigurationFormatError(f"неверное число: {exc}", line_number) from exc
    if Z is None:
        raise ConfigurationFormatError("нет строки 'Z'")
    if not orbitals:
        raise ConfigurationFormatError("нет ни одной орбитали")
    symmetry: Dict[Tuple[int, int], int] = {}
    for i, j, value, line_number in overrides:
        if not (1 <= i <= len(orbitals) and 1 <= j <= len(orbitals)) or i == j:
            raise ConfigurationFormatError(f"недопустимая пара ({i}, {j})", line_number)
        symmetry[(i - 1, j - 1)] = value
    config = Configuration.build(Z, orbitals, symmetry)
    ensure_valid_configuration(config)
    return config


def load_configuration(path: str) -> Configuration:
    """Читает конфигурацию из файла."""
    with open(path, encoding='utf-8') as handle:
        return parse_configuration(handle.read())


def format_configuration(c: Configuration) -> str:
    """Записывает конфигурацию в текстовый формат :func:`parse_configuration`."""
    lines = [f"Z {c.Z}"]
    for o in c.orbitals:
        lines.append(f"{o.n} {o.l} {o.m} {o.J} {o.P} {o.xi!r}")
    for i in range(c.N):
        for j in range(i + 1, c.N):
            if c.symmetry[i][j] != 1:
                lines.append(f"S {i + 1} {j + 1} {c.symmetry[i][j]}")
    return '\n'.join(lines) + '\n'
