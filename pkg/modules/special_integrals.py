"""Обобщённые интегралы Y_I, Y_II, Y_V и Y_III.

* ``y1`` — ∫₀^π sin^a x cos^p x dx через бета-функцию (вещественные
  показатели, чётность cos задаётся явно);
* ``y2`` — ∫₀^{2π} sin^k x cos^p x dx для целых показателей;
* ``y5`` — тройной радиальный интеграл по r1, r2 и r12 ∈ [|r1−r2|, r1+r2];
* ``y3`` — тот же интеграл с весом sin^{s6}β·cos^{s7}β, где β — угол
  между радиус-векторами электронов.

Для целых степеней r12 используется биномиальное разложение и
гипергеометрическая функция Гаусса, иначе — адаптивная квадратура
замкнутого внутреннего интеграла.
"""

from functools import lru_cache
from typing import Callable, Optional
import logging
import math
import warnings

import numpy as np
from scipy import integrate, special

from .errors import DivergentTermError, DomainError, SeriesDivergenceError
from .settings import get_setting

logger = logging.getLogger(__name__)

_INTEGER_EPS = 1e-12


def _near_int(value: float) -> bool:
    return abs(value - round(value)) < _INTEGER_EPS


def y1(a: float, p: float, parity: Optional[int] = None) -> float:
    """∫₀^π sin^a x cos^p x dx.

    :param a: показатель синуса, a > −1
    :param p: показатель косинуса, p > −1
    :param parity: чётность косинуса для вещественного p; по умолчанию
        p должно быть целым
    :return: значение интеграла
    """
    if a <= -1:
        raise DomainError(f"y1: показатель синуса {a!r} ≤ −1")
    if p <= -1:
        raise DomainError(f"y1: показатель косинуса {p!r} ≤ −1")
    if parity is None:
        if not _near_int(p):
            raise DomainError("y1: для нецелого показателя нужна чётность")
        parity = int(round(p))
    if parity % 2:
        return 0.0
    return float(special.beta((a + 1) / 2, (p + 1) / 2))


def y2(k: int, p: int) -> float:
    """∫₀^{2π} sin^k x cos^p x dx для целых k, p ≥ 0."""
    if k < 0 or p < 0:
        raise DomainError("y2: показатели должны быть неотрицательными")
    if k % 2 or p % 2:
        return 0.0
    return float(2 * special.beta((k + 1) / 2, (p + 1) / 2))


def _ordered(p: float, q: float, rate_in: float, rate_out: float) -> float:
    """∫₀^∞ r^q e^{−rate_out·r} ∫₀^r t^p e^{−rate_in·t} dt dr."""
    s = p + q + 2
    if p <= -1 or s <= 0:
        raise DivergentTermError(f"упорядоченный интеграл расходится (p={p}, q={q})")
    total = rate_in + rate_out
    prefactor = math.exp(math.lgamma(s) - s * math.log(total)) / (p + 1)
    return prefactor * float(special.hyp2f1(s, 1.0, p + 2, rate_in / total))


def _inner_kernel(u: float, e: float) -> float:
    """∫_{1−u}^{1+u} v^{e−1} dv."""
    if abs(e) < _INTEGER_EPS:
        return math.log1p(u) - math.log1p(-u)
    return ((1 + u) ** e - (1 - u) ** e) / e


def _check_y5(s1: float, s2: float, s3: float, s4: float, s5: float) -> None:
    if s1 <= 0 or s2 <= 0:
        raise DomainError(f"y5: скорости затухания должны быть положительны ({s1}, {s2})")
    if s3 <= -2 or s4 <= -2 or s5 <= -2 or s3 + s4 + s5 + 3 <= 0:
        raise DivergentTermError(f"y5 расходится при степенях ({s3}, {s4}, {s5})")


@lru_cache(maxsize=200000)
def y5(s1: float, s2: float, s3: float, s4: float, s5: float) -> float:
    """∫∫ r1^{s3} e^{−s1 r1} r2^{s4} e^{−s2 r2} ∫_{|r1−r2|}^{r1+r2} r12^{s5} dr12 dr2 dr1.

    :param s1: скорость затухания по r1
    :param s2: скорость затухания по r2
    :param s3: степень r1
    :param s4: степень r2
    :param s5: степень r12
    :return: значение интеграла
    """
    _check_y5(s1, s2, s3, s4, s5)
    if s5 >= 0 and _near_int(s5):
        c = int(round(s5))
        total = 0.0
        for j in range(1, c + 2, 2):
            weight = math.comb(c + 1, j)
            total += weight * (_ordered(s3 + j, s4 + c + 1 - j, s1, s2)
                               + _ordered(s4 + j, s3 + c + 1 - j, s2, s1))
        return 2.0 * total / (c + 1)
    return _y5_by_quadrature(s1, s2, s3, s4, s5)


def _y5_by_quadrature(s1: float, s2: float, s3: float, s4: float, s5: float) -> float:
    e = s5 + 1
    power = s3 + s4 + s5 + 3

    def lower(u: float) -> float:
        return u ** s3 * _inner_kernel(u, e) * (s2 + s1 * u) ** (-power)

    def upper(u: float) -> float:
        return u ** s4 * _inner_kernel(u, e) * (s1 + s2 * u) ** (-power)

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        first = integrate.quad(lower, 0.0, 1.0, epsabs=0.0, epsrel=1e-11, limit=200)[0]
        second = integrate.quad(upper, 0.0, 1.0, epsabs=0.0, epsrel=1e-11, limit=200)[0]
    return math.gamma(power) * (first + second)


def _check_y3(s6: int, s7: int) -> None:
    if s6 < 0 or s7 < 0 or int(s6) != s6 or int(s7) != s7:
        raise DomainError("y3: показатели sin β и cos β должны быть целыми ≥ 0")


def _y3_even(s1: float, s2: float, s3: float, s4: float, s5: float, s6: int, s7: int) -> float:
    half = s6 // 2
    total = 0.0
    for k1 in range(half + 1):
        order = s7 + 2 * k1
        outer = math.comb(half, k1) / 2 ** order
        for k2 in range(order + 1):
            middle = outer * math.comb(order, k2) * (-1) ** (s7 + k1 - k2)
            for k3 in range(k2 + 1):
                total += middle * math.comb(k2, k3) * y5(
                    s4, s5,
                    s2 + 2 * k2 - 2 * k3 - order,
                    s3 + 2 * k3 - order,
                    s1 + 2 * order - 2 * k2,
                )
    return total


def _sqrt_coefficient(k: int) -> float:
    """Коэффициент при x^k в разложении √(1 − x)."""
    return math.comb(2 * k, k) / ((1 - 2 * k) * 4 ** k)


def y3_by_quadrature(s1: float, s2: float, s3: float, s4: float, s5: float,
                     weight: Callable[[np.ndarray], np.ndarray]) -> float:
    """Y_III с произвольным весом w(cos β) двумерной квадратурой.

    Внутренняя переменная r12 = r_> (1 + u t), t ∈ [−1, 1], где
    u = r_< / r_>; тогда cos β = (u − 2t − u t²)/2.
    """
    if s2 <= -2 or s3 <= -2 or s1 <= -2:
        raise DivergentTermError(f"Y_III расходится при степенях ({s1}, {s2}, {s3})")
    power = s1 + s2 + s3 + 3

    def kernel(u: float) -> float:
        def inner(t: float) -> float:
            cos_beta = min(1.0, max(-1.0, 0.5 * (u - 2 * t - u * t * t)))
            return (1 + u * t) ** s1 * float(weight(np.asarray(cos_beta)))
        return integrate.quad(inner, -1.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=200)[0]

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        lower = integrate.quad(lambda u: kernel(u) * (s4 * u + s5) ** (-power), 0.0, 1.0,
                               weight='alg', wvar=(s2 + 1, 0.0), epsabs=0.0, epsrel=1e-10,
                               limit=200)[0]
        upper = integrate.quad(lambda u: kernel(u) * (s5 * u + s4) ** (-power), 0.0, 1.0,
                               weight='alg', wvar=(s3 + 1, 0.0), epsabs=0.0, epsrel=1e-10,
                               limit=200)[0]
    return math.gamma(power) * (lower + upper)


def _trig_weight(s6: int, s7: int) -> Callable[[np.ndarray], np.ndarray]:
    def weight(c: np.ndarray) -> np.ndarray:
        return np.sqrt(np.clip(1 - c * c, 0.0, None)) ** s6 * c ** s7
    return weight


def _y3_odd(s1: float, s2: float, s3: float, s4: float, s5: float, s6: int, s7: int) -> float:
    tolerance = get_setting('series_tolerance')
    max_terms = get_setting('series_max_terms')
    growth_limit = get_setting('series_growth_limit')
    total = 0.0
    previous = math.inf
    growth = 0
    for k in range(max_terms):
        try:
            term = _sqrt_coefficient(k) * _y3_even(s1, s2, s3, s4, s5, s6 - 1, s7 + 2 * k)
        except DivergentTermError:
            logger.debug("Y_III: остаток ряда с k=%d берётся квадратурой", k)
            return total + _odd_remainder(s1, s2, s3, s4, s5, s6, s7, k)
        total += term
        if abs(term) > abs(previous):
            growth += 1
            if growth >= growth_limit:
                raise SeriesDivergenceError(f"Y_III: члены растут {growth} раза подряд")
        else:
            growth = 0
        if abs(term) <= tolerance * abs(total):
            return total
        previous = term
    logger.warning("Y_III: достигнут предел %d членов, остаток берётся квадратурой", max_terms)
    return total + _odd_remainder(s1, s2, s3, s4, s5, s6, s7, max_terms)


def _odd_remainder(s1: float, s2: float, s3: float, s4: float, s5: float,
                   s6: int, s7: int, start: int) -> float:
    """Сумма членов ряда начиная с ``start`` одной квадратурой."""
    coefficients = [_sqrt_coefficient(k) for k in range(start)]

    def weight(c: np.ndarray) -> np.ndarray:
        x = c * c
        partial = sum(coef * x ** k for k, coef in enumerate(coefficients))
        sin_beta = np.sqrt(np.clip(1 - x, 0.0, None))
        return sin_beta ** (s6 - 1) * c ** s7 * (sin_beta - partial)

    return y3_by_quadrature(s1, s2, s3, s4, s5, weight)


def y3(s1: float, s2: float, s3: float, s4: float, s5: float, s6: int, s7: int) -> float:
    """Y_III: ∫∫∫ r12^{s1} r1^{s2} r2^{s3} e^{−s4 r1 − s5 r2} sin^{s6}β cos^{s7}β.

    Чётное s6 раскрывается конечной суммой Y_V; нечётное — рядом по
    степеням cos²β из разложения √(1 − cos²β).

    :return: значение интеграла
    """
    _check_y3(s6, s7)
    s6, s7 = int(s6), int(s7)
    if s4 <= 0 or s5 <= 0:
        raise DomainError("y3: скорости затухания должны быть положительны")
    if s6 % 2:
        return _y3_odd(s1, s2, s3, s4, s5, s6, s7)
    try:
        return _y3_even(s1, s2, s3, s4, s5, s6, s7)
    except DivergentTermError:
        logger.debug("Y_III: член разложения вне области сходимости, квадратура")
        return y3_by_quadrature(s1, s2, s3, s4, s5, _trig_weight(s6, s7))
