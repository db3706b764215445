"""Квадратурные оракулы для проверки аналитических интегралов.

``quad_oracle`` — адаптивная вложенная квадратура SciPy с обрезкой
бесконечных пределов на r_max = cutoff / min ξ. ``coupling_oracle``
считает двухэлектронный интеграл в координатах Хиллерааса: угловой
множитель G(cos β) раскладывается по многочленам Лежандра, интеграл
по общему масштабу R берётся через Γ-функцию, по r12 формулой Гаусса,
а по отношению радиусов u адаптивно, отдельно по обе стороны r1 = r2.
Порядки растут по уровням, пока относительное изменение не станет
меньше допуска. Оракул используется и как запасной путь в ``coupling``.
"""

from typing import Callable, List, Optional, Sequence, Tuple
import logging
import math
import warnings

import numpy as np
from scipy import integrate, special

from .delta_hydrogenic import DeltaTriple, HydrogenicSolution, solve_orbital
from .errors import ToleranceNotMetError
from .quantum_model import Orbital
from .settings import get_setting

logger = logging.getLogger(__name__)

Range = Tuple[float, float]


def cutoff_radius(xis: Sequence[float]) -> float:
    """Радиус обрезки r_max = cutoff / min ξ."""
    return get_setting('oracle_cutoff') / min(xis)


def quad_oracle(integrand: Callable[..., float], ranges: Sequence, tol: Optional[float] = None,
                r_max: Optional[float] = None) -> float:
    """Адаптивная вложенная квадратура.

    :param integrand: функция f(x_0, …, x_{k−1}); x_0 — самая внутренняя переменная
    :param ranges: пределы в порядке ``scipy.integrate.nquad`` (кортежи или функции)
    :param tol: требуемая относительная точность
    :param r_max: замена для бесконечных верхних пределов
    :return: значение интеграла
    """
    tol = get_setting('oracle_tolerance') if tol is None else tol
    prepared: List = []
    for bounds in ranges:
        if callable(bounds) or r_max is None:
            prepared.append(bounds)
            continue
        low, high = bounds
        prepared.append((low, r_max if math.isinf(high) else high))
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        value, error = integrate.nquad(integrand, prepared,
                                       opts={'epsabs': 0.0, 'epsrel': tol / 10, 'limit': 200})
    if not math.isfinite(value) or error > tol * max(abs(value), 1e-300):
        raise ToleranceNotMetError(f"оценка ошибки {error:.3e} при значении {value:.6e}")
    return value


# Векторные части орбитали (без экспоненты в радиальной части).

def theta_values(solution: HydrogenicSolution, cos_t: np.ndarray, sin_t: np.ndarray) -> np.ndarray:
    abs_cos = np.abs(cos_t)
    total = np.zeros_like(cos_t, dtype=float)
    for k, coefficient in enumerate(solution.a_coeffs):
        total = total + coefficient * abs_cos ** (solution.T - 2 * k)
    if solution.cos_parity:
        total = total * np.sign(cos_t)
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.maximum(sin_t, 1e-300) ** solution.sin_power * total


def phi_values(m: int, cos_p: np.ndarray, sin_p: np.ndarray) -> np.ndarray:
    angle = np.arctan2(sin_p, cos_p)
    return np.cos(m * angle) if m >= 0 else np.sin(-m * angle)


def radial_polynomial(solution: HydrogenicSolution, r: np.ndarray) -> np.ndarray:
    shift = solution.radial_shift - 0.5
    total = np.zeros_like(r, dtype=float)
    for k, coefficient in enumerate(solution.b_coeffs):
        total = total + coefficient * r ** (k + shift)
    return total


def _legendre(n: int, low: float, high: float) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (high - low)
    return low + half * (nodes + 1), half * weights


def _periodic(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return 2 * np.pi * np.arange(n) / n, np.full(n, 2 * np.pi / n)


def orbital_overlap(first: HydrogenicSolution, second: HydrogenicSolution, order: int = 64) -> float:
    """⟨φa|φb⟩ ненормированных орбиталей по формулам Гаусса (без аналитики)."""
    x, wx = np.polynomial.laguerre.laggauss(order)
    rate = first.xi + second.xi
    r = x / rate
    radial = np.sum(wx * radial_polynomial(first, r) * radial_polynomial(second, r) * r ** 2) / rate
    theta, wt = _legendre(order, 0.0, np.pi)
    ct, st = np.cos(theta), np.sin(theta)
    angular = np.sum(wt * theta_values(first, ct, st) * theta_values(second, ct, st) * st)
    phi, wp = _periodic(order)
    cp, sp = np.cos(phi), np.sin(phi)
    azimuthal = np.sum(wp * phi_values(first.orbital.m, cp, sp) * phi_values(second.orbital.m, cp, sp))
    return float(radial * angular * azimuthal)


def orbital_norm(solution: HydrogenicSolution, order: int = 64) -> float:
    return orbital_overlap(solution, solution, order)


def _angular_factor(sols: Sequence[HydrogenicSolution], h: Sequence[float], cos_beta: np.ndarray,
                    theta_order: int, phi_order: int) -> np.ndarray:
    """G(β): интеграл по θ1, φ1, χ угловых частей обоих электронов."""
    a, b, c, e = sols
    h5, h6, h7, h8, h9, h10, h11, h12 = (int(v) for v in h[4:12])
    theta, wt = _legendre(theta_order, 0.0, np.pi)
    phi, wp = _periodic(phi_order)
    chi, wc = _periodic(phi_order)
    ct, st = np.cos(theta)[:, None], np.sin(theta)[:, None]
    cp, sp = np.cos(phi)[None, :], np.sin(phi)[None, :]

    first = (theta_values(a, ct, st) * theta_values(b, ct, st) * ct ** h5 * st ** h7
             * phi_values(a.orbital.m, cp, sp) * phi_values(b.orbital.m, cp, sp)
             * cp ** h9 * sp ** h11)
    first = first * (wt * np.sin(theta))[:, None] * wp[None, :]

    ct4, st4 = ct[None, :, :, None], st[None, :, :, None]
    cp4, sp4 = cp[None, :, :, None], sp[None, :, :, None]
    cx4, sx4 = np.cos(chi)[None, None, None, :], np.sin(chi)[None, None, None, :]
    result = np.empty(cos_beta.size)
    chunk = 16
    for start in range(0, cos_beta.size, chunk):
        cb = cos_beta[start:start + chunk][:, None, None, None]
        sb = np.sqrt(np.clip(1 - cb * cb, 0.0, None))
        z2 = ct4 * cb + st4 * sb * cx4
        big_a = st4 * cb - ct4 * sb * cx4
        big_b = sb * sx4
        x2 = big_a * cp4 + big_b * sp4
        y2 = big_a * sp4 - big_b * cp4
        s2 = np.sqrt(x2 * x2 + y2 * y2)
        safe = np.maximum(s2, 1e-300)
        second = (theta_values(c, z2, s2) * theta_values(e, z2, s2) * z2 ** h6 * s2 ** h8
                  * phi_values(c.orbital.m, x2, y2) * phi_values(e.orbital.m, x2, y2)
                  * (x2 / safe) ** h10 * (y2 / safe) ** h12)
        result[start:start + chunk] = np.einsum('mtpc,tp,c->m', second, first, wc)
    return result


def _degree_bound(sols: Sequence[HydrogenicSolution], h: Sequence[float]) -> int:
    """Верхняя оценка степени G по cos β при целых показателях."""
    return (sum(s.orbital.l + s.orbital.J for s in sols)
            + sum(int(v) for v in h[4:12]))


def _angular_series(sols: Sequence[HydrogenicSolution], h: Sequence[float], level: int) -> np.ndarray:
    """Коэффициенты разложения G(cos β) по многочленам Лежандра."""
    size = _degree_bound(sols, h) + 6 + 4 * level
    nodes, _ = np.polynomial.legendre.leggauss(size)
    values = _angular_factor(sols, h, nodes, 24 + 12 * level, 16 + 8 * level)
    return np.polynomial.legendre.legfit(nodes, values, size - 1)


def _radial_terms(first: HydrogenicSolution, second: HydrogenicSolution) -> Tuple[np.ndarray, np.ndarray]:
    """Коэффициенты и степени r в произведении радиальных многочленов."""
    coefs, powers = [], []
    for ka, ca in enumerate(first.b_coeffs):
        for kb, cb in enumerate(second.b_coeffs):
            coefs.append(ca * cb)
            powers.append(ka + kb + first.radial_shift + second.radial_shift - 1)
    return np.array(coefs), np.array(powers)


def _side(inner: Tuple[np.ndarray, np.ndarray], outer: Tuple[np.ndarray, np.ndarray],
          h_inner: float, h_outer: float, h12: float, rate_inner: float, rate_outer: float,
          series: np.ndarray, n_t: int, tol: float) -> float:
    """Вклад области, где r_inner = u·R < r_outer = R.

    По R интеграл берётся замкнуто через Γ, по t = (r12/R − 1)/u формулой
    Гаусса, по u адаптивно.
    """
    t, wt = np.polynomial.legendre.leggauss(n_t)
    inner_coefs, inner_powers = inner
    outer_coefs, outer_powers = outer
    coefs = np.outer(inner_coefs, outer_coefs)
    total_power = (inner_powers[:, None] + outer_powers[None, :]
                   + h_inner + h_outer + h12 + 5)
    log_gamma = special.gammaln(total_power + 1)
    u_powers = inner_powers + h_inner + 2

    def integrand(u: float) -> float:
        v = 1 + u * t
        cos_beta = 0.5 * (u - 2 * t - u * t * t)
        angular = float(np.sum(wt * np.polynomial.legendre.legval(cos_beta, series) * v ** (h12 + 1)))
        if angular == 0.0:
            return 0.0
        rate = rate_inner * u + rate_outer
        radial = np.exp(log_gamma - (total_power + 1) * math.log(rate))
        return angular * float(np.sum(coefs * (u ** u_powers)[:, None] * radial))

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        value, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=tol * 1e-8, epsrel=tol / 10, limit=200)
    return value


def _coupling_rule(sols: Sequence[HydrogenicSolution], h: Sequence[float], level: int,
                   tol: float) -> float:
    a, b, c, e = sols
    h2, h3, h4 = float(h[1]), float(h[2]), float(h[3])
    series = _angular_series(sols, h, level)
    n_t = _degree_bound(sols, h) + 6 + 4 * level
    first, second = _radial_terms(a, b), _radial_terms(c, e)
    rate1, rate2 = a.xi + b.xi, c.xi + e.xi
    # области r1 < r2 и r2 < r1 разделены по r1 = r2
    return (_side(first, second, h2, h3, h4, rate1, rate2, series, n_t, tol)
            + _side(second, first, h3, h2, h4, rate2, rate1, series, n_t, tol))


def coupling_oracle(a: Orbital, b: Orbital, c: Orbital, e: Orbital, h: Sequence[float],
                    d: DeltaTriple, tol: Optional[float] = None) -> float:
    """Двухэлектронный интеграл ⟨φaφb(r1)| M(h) |φcφe(r2)⟩ квадратурой.

    :param a: первая орбиталь электрона 1
    :param b: вторая орбиталь электрона 1
    :param c: первая орбиталь электрона 2
    :param e: вторая орбиталь электрона 2
    :param h: 12 компонент описателя взаимодействия
    :param d: тройка δ
    :param tol: относительная точность
    :return: значение с нормированными орбиталями
    """
    tol = get_setting('oracle_tolerance') if tol is None else tol
    sols = [solve_orbital(o, d.z, d, xi=o.xi) for o in (a, b, c, e)]
    norm = math.sqrt(math.prod(orbital_norm(s) for s in sols))
    previous: Optional[float] = None
    for level in range(get_setting('oracle_max_levels')):
        value = _coupling_rule(sols, h, level, tol) / norm
        # нулевые по чётности интегралы сравниваются с абсолютным порогом
        if previous is not None and abs(value - previous) <= tol * max(abs(value), 1e-6):
            logger.debug("оракул сошёлся на уровне %d: %.12g", level, value)
            return h[0] * value
        previous = value
    raise ToleranceNotMetError(f"оракул не достиг точности {tol:g}")
