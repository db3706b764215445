"""Одноэлектронные и двухэлектронные интегралы для функционала энергии.

Перекрывание и ⟨1/r⟩ разделяются на φ-, θ- и радиальный множители.
Двухэлектронный интеграл I_II считается в координатах Хиллерааса:
угловые множители второго электрона выражаются через углы первого
электрона и углы (β, χ) между радиус-векторами, интегралы по θ1, φ1 и
χ берутся замкнуто (y1, y2), а остаток собирается в вызовы y3.
Угловая редукция не зависит от ξ и кэшируется отдельно.

Если показатели второго электрона не целые в пределах допуска,
используется квадратурный оракул, и результат помечается.
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import math
import threading

from .delta_hydrogenic import DeltaTriple, HydrogenicSolution, radial_coeffs, solve_orbital
from .errors import DomainError
from .quadrature import coupling_oracle
from .quantum_model import Core, Orbital
from .settings import get_setting
from .special_integrals import y1, y2, y3

logger = logging.getLogger(__name__)

ANALYTIC = 'analytic'
QUADRATURE = 'quadrature'

# Пары компонент h (с нуля), которые меняются местами при обмене электронов.
_SWAP_PAIRS = ((1, 2), (4, 5), (6, 7), (8, 9), (10, 11))


@dataclass(frozen=True)
class InteractionTerm:
    """Описатель взаимодействия M(h) из 12 компонент.

    h1 — амплитуда; h2, h3, h4 — степени r1, r2, r12; h5..h12 — степени
    cos θ1, cos θ2, sin θ1, sin θ2, cos φ1, cos φ2, sin φ1, sin φ2.
    """

    h: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.h) != 12:
            raise DomainError(f"описатель взаимодействия должен иметь 12 компонент, а не {len(self.h)}")
        for index, value in enumerate(self.h[4:], start=5):
            if value < 0 or int(value) != value:
                raise DomainError(f"h{index} должно быть целым ≥ 0, получено {value!r}")
        object.__setattr__(self, 'h', tuple(float(v) for v in self.h[:4])
                           + tuple(int(v) for v in self.h[4:]))

    @classmethod
    def coulomb(cls, amplitude: float = 1.0) -> 'InteractionTerm':
        return cls((amplitude, 0, 0, -1) + (0,) * 8)

    @property
    def amplitude(self) -> float:
        return self.h[0]

    @property
    def angular(self) -> Tuple[int, ...]:
        """(h5, …, h12)."""
        return tuple(self.h[4:])

    def swapped(self) -> 'InteractionTerm':
        """Описатель после обмена электронов 1 ↔ 2."""
        values = list(self.h)
        for first, second in _SWAP_PAIRS:
            values[first], values[second] = values[second], values[first]
        return InteractionTerm(tuple(values))


@dataclass(frozen=True)
class IntegralKey:
    """Ключ кэша: четыре орбитали с округлённым ξ, описатель, δ и допуск."""

    orbitals: Tuple[Tuple[Core, float], ...]
    h: Tuple[float, ...]
    deltas: Tuple[int, float, float, float]
    tolerance: float

    @classmethod
    def build(cls, orbitals: Sequence[Orbital], term: InteractionTerm, d: DeltaTriple,
              tolerance: float) -> 'IntegralKey':
        return cls(tuple((o.core, o.xi) for o in orbitals), term.h, d.signature, tolerance)


class IntegralCache:
    """Неограниченный кэш значений I_II.

    Чтение, вставка и счётчики обращений выполняются под блокировкой;
    значения — неизменяемые пары (значение, путь).
    """

    def __init__(self) -> None:
        self._values: Dict[IntegralKey, Tuple[float, str]] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: IntegralKey) -> Optional[Tuple[float, str]]:
        with self._lock:
            found = self._values.get(key)
            if found is None:
                self.misses += 1
            else:
                self.hits += 1
        return found

    def put(self, key: IntegralKey, value: float, path: str) -> None:
        with self._lock:
            self._values.setdefault(key, (value, path))

    def __len__(self) -> int:
        return len(self._values)

    def stats(self) -> Dict[str, int]:
        with self._lock:
            fallbacks = sum(1 for _, path in self._values.values() if path == QUADRATURE)
            return {'hits': self.hits, 'misses': self.misses, 'size': len(self._values),
                    'fallbacks': fallbacks}

    def clear(self) -> None:
        with self._lock:
            self._values.clear()
            self.hits = 0
            self.misses = 0


DEFAULT_CACHE = IntegralCache()


def canonical(o: Orbital) -> Orbital:
    """Орбиталь с ξ, округлённым до ``xi_key_digits`` знаков."""
    return o.with_xi(round(o.xi, get_setting('xi_key_digits')))


@lru_cache(maxsize=None)
def _shape(core: Core, d: DeltaTriple) -> HydrogenicSolution:
    """Не зависящая от ξ часть решения (радиальные коэффициенты при ξ = 1 не используются)."""
    return solve_orbital(Orbital(*core), d.z, d, xi=1.0)


# Многочлены по тригонометрическим переменным: словарь {показатели: коэффициент}.

Poly = Dict[Tuple[int, ...], float]


def _mul(first: Poly, second: Poly) -> Poly:
    result: Poly = defaultdict(float)
    for exp_a, coef_a in first.items():
        for exp_b, coef_b in second.items():
            result[tuple(x + y for x, y in zip(exp_a, exp_b))] += coef_a * coef_b
    return dict(result)


def _power(base: Poly, n: int, size: int) -> Poly:
    result: Poly = {(0,) * size: 1.0}
    for _ in range(n):
        result = _mul(result, base)
    return result


@lru_cache(maxsize=None)
def _phi_poly(m: int) -> Tuple[Tuple[Tuple[int, int], float], ...]:
    """cos(mφ) при m ≥ 0 или sin(|m|φ) при m < 0 как многочлен {(степень cos, степень sin)}."""
    order = abs(m)
    terms = []
    for j in range(order + 1):
        if m >= 0 and j % 2 == 0:
            sign = (-1) ** (j // 2)
        elif m < 0 and j % 2 == 1:
            sign = (-1) ** ((j - 1) // 2)
        else:
            continue
        terms.append(((order - j, j), sign * math.comb(order, j)))
    return tuple(terms)


def _phi_product(m1: int, m2: int, cos_extra: int, sin_extra: int) -> Poly:
    result: Poly = defaultdict(float)
    for (c1, s1), k1 in _phi_poly(m1):
        for (c2, s2), k2 in _phi_poly(m2):
            result[(c1 + c2 + cos_extra, s1 + s2 + sin_extra)] += k1 * k2
    return dict(result)


def _theta_terms(a: HydrogenicSolution, b: HydrogenicSolution, extra: int) -> List[Tuple[float, float]]:
    """Пары (показатель |cos θ|, коэффициент) произведения Θa·Θb·cos^extra θ."""
    return [(a.T + b.T - 2 * ka - 2 * kb + extra, coef_a * coef_b)
            for ka, coef_a in enumerate(a.a_coeffs)
            for kb, coef_b in enumerate(b.a_coeffs)]


def _radial_groups(core: Core, d: DeltaTriple, xi: float) -> Dict[int, float]:
    return {k: c for k, c in enumerate(radial_coeffs(Orbital(*core), d, xi))}


def _pair_groups(a: Orbital, b: Orbital, d: DeltaTriple) -> Dict[int, float]:
    """Коэффициенты при r^(K + ga + gb − 1) в произведении Ra·Rb."""
    groups: Dict[int, float] = defaultdict(float)
    for ka, ca in _radial_groups(a.core, d, a.xi).items():
        for kb, cb in _radial_groups(b.core, d, b.xi).items():
            groups[ka + kb] += ca * cb
    return dict(groups)


def _one_electron(a: Orbital, b: Orbital, d: DeltaTriple, radial_extra: int) -> float:
    """⟨φa| r^radial_extra |φb⟩ без нормировки."""
    sa, sb = _shape(a.core, d), _shape(b.core, d)
    phi = sum(coef * y2(s, c) for (c, s), coef in _phi_product(a.m, b.m, 0, 0).items())
    if phi == 0.0:
        return 0.0
    parity = sa.cos_parity + sb.cos_parity
    sin_power = sa.sin_power + sb.sin_power + 1
    theta = sum(coef * y1(sin_power, p, parity) for p, coef in _theta_terms(sa, sb, 0))
    if theta == 0.0:
        return 0.0
    rate = a.xi + b.xi
    base = sa.radial_shift + sb.radial_shift - 1 + 2 + radial_extra
    radial = 0.0
    for k, coef in _pair_groups(a, b, d).items():
        power = base + k
        radial += coef * math.exp(math.lgamma(power + 1) - (power + 1) * math.log(rate))
    return phi * theta * radial


def normalization(o: Orbital, d: DeltaTriple) -> float:
    """Нормировочная константа A = 1/√⟨φ|φ⟩."""
    return 1.0 / math.sqrt(_one_electron(o, o, d, 0))


def overlap(a: Orbital, b: Orbital, d: DeltaTriple) -> float:
    """u_ab = ⟨φa|φb⟩ нормированных орбиталей."""
    return _one_electron(a, b, d, 0) * normalization(a, d) * normalization(b, d)


def nuclear(a: Orbital, b: Orbital, d: DeltaTriple) -> float:
    """V_ab = ⟨φa|1/r|φb⟩ нормированных орбиталей."""
    return _one_electron(a, b, d, -1) * normalization(a, d) * normalization(b, d)


# Переменные угловой редукции: cθ1, sθ1, cφ1, sφ1, cβ, sβ, cχ, sχ.
_SIZE = 8


def _monomial(**powers: int) -> Poly:
    names = ('ct', 'st', 'cp', 'sp', 'cb', 'sb', 'cx', 'sx')
    return {tuple(powers.get(name, 0) for name in names): 1.0}


def _add(*polys: Tuple[float, Poly]) -> Poly:
    result: Poly = defaultdict(float)
    for scale, poly in polys:
        for exp, coef in poly.items():
            result[exp] += scale * coef
    return {exp: coef for exp, coef in result.items() if coef != 0.0}


_Z2 = _add((1.0, _monomial(ct=1, cb=1)), (1.0, _monomial(st=1, sb=1, cx=1)))
_A2 = _add((1.0, _monomial(st=1, cb=1)), (-1.0, _monomial(ct=1, sb=1, cx=1)))
_B2 = _monomial(sb=1, sx=1)
_X2 = _add((1.0, _mul(_A2, _monomial(cp=1))), (1.0, _mul(_B2, _monomial(sp=1))))
_Y2 = _add((1.0, _mul(_A2, _monomial(sp=1))), (-1.0, _mul(_B2, _monomial(cp=1))))
_ONE_MINUS_Z2_SQ = _add((1.0, {(0,) * _SIZE: 1.0}), (-1.0, _mul(_Z2, _Z2)))


@lru_cache(maxsize=None)
def _rewrite_power(name: str, n: int) -> Tuple[Tuple[Tuple[int, ...], float], ...]:
    base = {'z': _Z2, 'x': _X2, 'y': _Y2, 'w': _ONE_MINUS_Z2_SQ}[name]
    return tuple(_power(base, n, _SIZE).items())


def _nearest_integer(value: float, tolerance: float) -> Optional[int]:
    rounded = int(round(value))
    return rounded if abs(value - rounded) <= tolerance else None


@lru_cache(maxsize=None)
def angular_reduction(cores: Tuple[Core, Core, Core, Core], angular: Tuple[int, ...],
                      d: DeltaTriple, tolerance: float
                      ) -> Optional[Tuple[Tuple[Tuple[int, int], float], ...]]:
    """Интеграл угловых частей по θ1, φ1, χ как многочлен от sin β, cos β.

    :param cores: квантовые числа орбиталей a, b (электрон 1) и c, e (электрон 2)
    :param angular: (h5, …, h12)
    :param d: тройка δ
    :param tolerance: допуск на нецелые показатели второго электрона
    :return: пары ((s6, s7), вес) или None, если показатели не целые
    """
    sa, sb, sc, se = (_shape(core, d) for core in cores)
    h5, h6, h7, h8, h9, h10, h11, h12 = angular

    phi2 = _phi_product(sc.orbital.m, se.orbital.m, h10, h12)
    phi_degree = abs(sc.orbital.m) + abs(se.orbital.m) + h10 + h12
    leftover = _nearest_integer(sc.sin_power + se.sin_power + h8 - phi_degree, tolerance)
    if leftover is None or leftover < 0 or leftover % 2:
        return None
    cos2: Dict[int, float] = defaultdict(float)
    for power, coef in _theta_terms(sc, se, h6):
        rounded = _nearest_integer(power, tolerance)
        if rounded is None or rounded < 0:
            return None
        cos2[rounded] += coef

    second: Poly = defaultdict(float)
    sin_part = dict(_rewrite_power('w', leftover // 2))
    for power, coef in cos2.items():
        base = _mul(dict(_rewrite_power('z', power)), sin_part)
        for (pc, ps), phi_coef in phi2.items():
            term = _mul(base, _mul(dict(_rewrite_power('x', pc)), dict(_rewrite_power('y', ps))))
            for exp, value in term.items():
                second[exp] += coef * phi_coef * value

    phi1 = _phi_product(sa.orbital.m, sb.orbital.m, h9, h11)
    theta1 = _theta_terms(sa, sb, h5)
    parity1 = sa.cos_parity + sb.cos_parity + h5
    sin1 = sa.sin_power + sb.sin_power + h7 + 1

    reduced: Dict[Tuple[int, int], float] = defaultdict(float)
    for (ct, st, cp, sp, cb, sb_, cx, sx), coef in second.items():
        if coef == 0.0:
            continue
        chi = y2(sx, cx)
        if chi == 0.0:
            continue
        phi = sum(k * y2(s + sp, c + cp) for (c, s), k in phi1.items())
        if phi == 0.0:
            continue
        theta = sum(k * y1(sin1 + st, p + ct, parity1 + ct) for p, k in theta1)
        reduced[(sb_, cb)] += coef * chi * phi * theta
    scale = max((abs(v) for v in reduced.values()), default=0.0)
    return tuple((key, value) for key, value in sorted(reduced.items())
                 if abs(value) > 1e-14 * scale)


def angular_degree(first: Orbital, second: Orbital, angular: Iterable[int]) -> int:
    return first.l + first.J + second.l + second.J + sum(angular)


def _electron_angular(term: InteractionTerm, electron: int) -> Tuple[int, ...]:
    offset = 4 if electron == 1 else 5
    return tuple(term.h[offset + 2 * k] for k in range(4))


def _analytic(a: Orbital, b: Orbital, c: Orbital, e: Orbital, term: InteractionTerm,
              d: DeltaTriple, tolerance: float) -> Optional[float]:
    reduction = angular_reduction((a.core, b.core, c.core, e.core), term.angular, d, tolerance)
    if reduction is None:
        return None
    if not reduction:
        return 0.0
    sa, sb, sc, se = (_shape(o.core, d) for o in (a, b, c, e))
    base1 = sa.radial_shift + sb.radial_shift - 1 + term.h[1] + 1
    base2 = sc.radial_shift + se.radial_shift - 1 + term.h[2] + 1
    r12_power = term.h[3] + 1
    groups1 = _pair_groups(a, b, d)
    groups2 = _pair_groups(c, e, d)
    rate1, rate2 = a.xi + b.xi, c.xi + e.xi
    total = 0.0
    for (s6, s7), weight in reduction:
        for k1, coef1 in groups1.items():
            for k2, coef2 in groups2.items():
                total += weight * coef1 * coef2 * y3(r12_power, base1 + k1, base2 + k2,
                                                     rate1, rate2, s6, s7)
    norm = math.prod(normalization(o, d) for o in (a, b, c, e))
    return term.amplitude * total * norm


def coupling_with_path(a: Orbital, b: Orbital, c: Orbital, e: Orbital, term: InteractionTerm,
                       d: DeltaTriple, tolerance: Optional[float] = None,
                       cache: Optional[IntegralCache] = None) -> Tuple[float, str]:
    """I_II и способ, которым он получен (``analytic`` или ``quadrature``).

    :param a: первая орбиталь электрона 1
    :param b: вторая орбиталь электрона 1
    :param c: первая орбиталь электрона 2
    :param e: вторая орбиталь электрона 2
    :param term: описатель взаимодействия
    :param d: тройка δ
    :param tolerance: допуск на нецелые показатели второго электрона
    :param cache: кэш; по умолчанию общий
    :return: (значение, путь)
    """
    tolerance = get_setting('integer_tolerance') if tolerance is None else tolerance
    cache = DEFAULT_CACHE if cache is None else cache
    a, b, c, e = (canonical(o) for o in (a, b, c, e))
    key = IntegralKey.build((a, b, c, e), term, d, tolerance)
    found = cache.get(key)
    if found is not None:
        return found

    if angular_degree(c, e, _electron_angular(term, 2)) > angular_degree(a, b, _electron_angular(term, 1)):
        oriented = (c, e, a, b, term.swapped())
    else:
        oriented = (a, b, c, e, term)
    value = _analytic(*oriented, d, tolerance)
    path = ANALYTIC
    if value is None:
        logger.debug("I_II %s: нецелые угловые показатели, квадратура", key)
        value = coupling_oracle(*oriented[:4], oriented[4].h, d)
        path = QUADRATURE
    cache.put(key, value, path)
    return value, path


def coupling(a: Orbital, b: Orbital, c: Orbital, e: Orbital, term: InteractionTerm,
             d: DeltaTriple, tolerance: Optional[float] = None,
             cache: Optional[IntegralCache] = None) -> float:
    """I_II(a, b, c, e; h) = ⟨φa φb(r1)| M(h) |φc φe(r2)⟩ с нормированными орбиталями."""
    return coupling_with_path(a, b, c, e, term, d, tolerance, cache)[0]
