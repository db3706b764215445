"""δ-функции заряда ядра и замкнутые решения модифицированного уравнения.

Для заданного Z тройка (δ1, δ2, δ3) вычисляется явным каскадом через
промежуточные Λ1–Λ3 и проверяется тремя опорными тождествами
(основной уровень, его лэмбовский партнёр и 2S-сдвиг). Затем для любой
орбитали строятся T, L, собственный показатель ξ, энергия и
коэффициенты угловых и радиальных многочленов; значения волновой
функции и невязка разделённых уравнений служат для проверки.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple
import logging
import math

from .errors import DomainError
from .quantum_model import CONSTS, Core, Orbital, PhysConsts, ensure_valid_orbital
from . import qed_reference

logger = logging.getLogger(__name__)

# Орбитали девяти строк таблиц сверхтонкой структуры.
HYDROGEN_LEVELS: Tuple[Core, ...] = (
    (1, 0, 0, 0, 0),
    (1, 0, 0, 0, 1),
    (2, 0, 0, 0, 0),
    (2, 0, 0, 0, 1),
    (1, 0, 0, 1, 0),
    (1, 0, 0, 1, 1),
    (2, 1, 0, 0, 0),
    (2, 1, 1, 0, 1),
    (2, 1, 0, 0, 1),
)

RESIDUAL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DeltaTriple:
    z: int
    kdot: int
    lambda1: float
    lambda2: float
    lambda3: float
    d1: float
    d2: float
    d3: float
    branch: str = 'minus'

    @property
    def signature(self) -> Tuple[int, float, float, float]:
        """Ключ для кэширования интегралов."""
        return (self.z, self.d1, self.d2, self.d3)


@dataclass(frozen=True)
class HydrogenicSolution:
    orbital: Orbital
    T: float
    L: float
    xi_eigen: float
    energy: float
    a_coeffs: Tuple[float, ...]
    b_coeffs: Tuple[float, ...]
    xi: float
    sin_power: float
    radial_shift: float
    cos_parity: int


def _sqrt(value: float, what: str) -> float:
    if value < 0:
        raise DomainError(f"отрицательный подкоренной аргумент в {what}: {value!r}")
    return math.sqrt(value)


def _lambdas(Z: int, consts: PhysConsts) -> Tuple[int, float, float, float]:
    alpha = consts.alpha
    az = alpha * Z
    kdot = int(math.floor(az + 1))
    ratio = az / kdot
    c = _sqrt(1 - ratio ** 2, "√(1 − (αZ/K)²)")
    # 2 − 2c без потери точности при малых αZ
    base = 2 * ratio ** 2 / (1 + c)
    shift = consts.delta1S * alpha ** 2 * Z ** 3 / kdot ** 3
    x1 = base + 1.5 * shift
    x2 = base - 0.5 * shift
    if x1 <= 0 or x2 <= 0:
        raise DomainError(f"Λ-знаменатель не положителен при Z={Z}")
    lambda1 = (2 * az - (2 * kdot - 1) * math.sqrt(x1)) ** 2 / x1
    lambda2 = (2 * az - (2 * kdot - 1) * math.sqrt(x2)) ** 2 / x2
    q = 2 * kdot + 1 + math.sqrt(lambda1)
    radicand = (kdot + 1) ** 4 - 8 * consts.delta2S * Z ** 2 * q ** 2
    lambda3 = ((kdot + 1) ** 2 * q / _sqrt(radicand, "Λ3") - 2 * kdot + 1) ** 2
    return kdot, lambda1, lambda2, lambda3


def _cascade(Z: int, kdot: int, lambdas: Tuple[float, float, float], sign: int) -> DeltaTriple:
    lambda1, lambda2, lambda3 = lambdas
    a = lambda2 - lambda3 + 16
    root = _sqrt(a ** 2 - 64 * lambda2 + 64 * lambda1, "δ1")
    d1 = (a - sign * root) ** 2 / 2048
    if d1 <= 0:
        raise DomainError(f"δ1 = {d1!r} при Z={Z}")
    d2 = 0.125 - (16 * math.sqrt(2 * d1) - lambda2 + lambda1) ** 2 / (1024 * d1)
    d3 = (2 - _sqrt(1 - 8 * d2, "δ3") - 2 * math.sqrt(2 * d1)) ** 2 / 8 - lambda1 / 8
    return DeltaTriple(Z, kdot, lambda1, lambda2, lambda3, d1, d2, d3,
                       'minus' if sign > 0 else 'plus')


@lru_cache(maxsize=None)
def solve_deltas(Z: int, consts: PhysConsts = CONSTS) -> DeltaTriple:
    """Вычисляет тройку δ для заряда Z.

    Берётся ветвь квадратного уравнения со знаком «минус»; если опорные
    тождества не выполняются, пробуется ветвь «плюс».

    :param Z: заряд ядра, 1 ≤ Z ≤ 137
    :return: тройка δ с промежуточными Λ
    """
    if not 1 <= Z <= 137:
        raise DomainError(f"Z={Z} вне диапазона 1..137")
    kdot, *lambdas = _lambdas(Z, consts)
    last_error: Optional[Exception] = None
    for sign in (1, -1):
        try:
            triple = _cascade(Z, kdot, tuple(lambdas), sign)
            residuals = defining_residuals(Z, triple, consts)
        except DomainError as exc:
            last_error = exc
            continue
        scale = _residual_scales(Z, triple.kdot, consts)
        worst = max(abs(r) / s for r, s in zip(residuals, scale))
        logger.debug("Z=%d ветвь %s: относительная невязка %.3e", Z, triple.branch, worst)
        if worst <= RESIDUAL_TOLERANCE:
            return triple
    raise DomainError(
        f"ни одна ветвь δ1 не удовлетворяет опорным тождествам при Z={Z}") from last_error


def zero_deltas(Z: int) -> DeltaTriple:
    """Нулевая тройка: базис обычного уравнения Шрёдингера."""
    return DeltaTriple(Z, 1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 'zero')


def _residual_scales(Z: int, kdot: int, consts: PhysConsts) -> Tuple[float, float, float]:
    base = Z ** 2 / (2 * kdot ** 2)
    return (base, base, Z ** 2 / (2 * (kdot + 1) ** 2))


def _targets(Z: int, kdot: int, consts: PhysConsts) -> Tuple[float, float, float]:
    ratio = consts.alpha * Z / kdot
    one_minus_c = ratio ** 2 / (1 + math.sqrt(1 - ratio ** 2))
    rest = -one_minus_c / consts.alpha ** 2
    magnetic = consts.delta1S * Z ** 3 / kdot ** 3
    return (rest - 0.75 * magnetic, rest + 0.25 * magnetic,
            16 * consts.delta2S * Z ** 4 / (kdot + 1) ** 4)


def defining_residuals(Z: int, d: DeltaTriple,
                       consts: PhysConsts = CONSTS) -> Tuple[float, float, float]:
    """Невязки трёх опорных тождеств, задающих δ (в хартри).

    :param Z: заряд ядра
    :param d: проверяемая тройка
    :return: (E_K0000 − цель, E_K0001 − цель, E_K0010 − E_(K+1)0000 − 16Δ2S Z⁴/(K+1)⁴)
    """
    k = d.kdot
    target_a, target_b, target_c = _targets(Z, k, consts)
    e_a = eigen_xi_energy(Orbital(k, 0, 0, 0, 0), Z, d)[1]
    e_b = eigen_xi_energy(Orbital(k, 0, 0, 0, 1), Z, d)[1]
    e_c = eigen_xi_energy(Orbital(k, 0, 0, 1, 0), Z, d)[1]
    e_next = eigen_xi_energy(Orbital(k + 1, 0, 0, 0, 0), Z, d)[1]
    return (e_a - target_a, e_b - target_b, (e_c - e_next) - target_c)


def t_and_l(o: Orbital, d: DeltaTriple) -> Tuple[float, float]:
    """Промежуточные величины T и L орбитали.

    :return: (T, L)
    """
    T = o.l - abs(o.m) + 0.5 - (-1) ** o.J * _sqrt(0.25 - 2 * d.d2, "T")
    L = T - (-1) ** o.P * _sqrt(o.m ** 2 + 2 * d.d1, "L")
    return T, L


def radial_shift(o: Orbital, d: DeltaTriple) -> float:
    """g = √((L + 1/2)² − 2δ3): радиальные степени имеют вид r^(k − 1/2 + g)."""
    _, L = t_and_l(o, d)
    radicand = (L + 0.5) ** 2 - 2 * d.d3
    if radicand < 0:
        raise DomainError(f"(L+1/2)² < 2δ3 для орбитали {o.core}")
    return math.sqrt(radicand)


def effective_denominator(o: Orbital, d: DeltaTriple) -> float:
    """D = n − l − 1/2 + g, так что собственный показатель ξ = Z/D."""
    denominator = o.n - o.l - 0.5 + radial_shift(o, d)
    if denominator <= 0:
        raise DomainError(f"неположительный знаменатель ξ для орбитали {o.core}")
    return denominator


def eigen_xi_energy(o: Orbital, Z: int, d: DeltaTriple) -> Tuple[float, float]:
    """Собственный показатель и энергия орбитали: ξ = Z/D, E = −ξ²/2."""
    xi = Z / effective_denominator(o, d)
    return xi, -0.5 * xi ** 2


def angular_coeffs(o: Orbital, d: DeltaTriple) -> List[float]:
    """Коэффициенты a_k углового многочлена, a_0 = 1."""
    T, L = t_and_l(o, d)
    coeffs = [1.0]
    for k in range(1, (o.l - abs(o.m)) // 2 + 1):
        denominator = 2 * k * (2 * L + 1 - 2 * k)
        if denominator == 0:
            raise DomainError(f"нулевой знаменатель a_{k} для орбитали {o.core}")
        numerator = (T - 2 * k + 2) * (T - 2 * k + 1) + 2 * d.d2
        coeffs.append(-numerator / denominator * coeffs[-1])
    return coeffs


def radial_coeffs(o: Orbital, d: DeltaTriple, xi: float) -> List[float]:
    """Коэффициенты b_k радиального многочлена при заданном ξ, b_0 = 1."""
    _, L = t_and_l(o, d)
    root = _sqrt((2 * L + 1) ** 2 - 8 * d.d3, "b_k")
    coeffs = [1.0]
    for k in range(1, o.n - o.l):
        denominator = k * (k + root)
        if denominator == 0:
            raise DomainError(f"нулевой знаменатель b_{k} для орбитали {o.core}")
        coeffs.append(-2 * xi * (o.n - o.l - k) / denominator * coeffs[-1])
    return coeffs


def sin_power(o: Orbital, d: DeltaTriple) -> float:
    """Показатель sin θ в Θ: (−1)^(P+1)·√(m² + 2δ1)."""
    return (-1) ** (o.P + 1) * math.sqrt(o.m ** 2 + 2 * d.d1)


def cos_parity(o: Orbital) -> int:
    """Чётность степеней cos θ в Θ (целая часть l − |m| + J)."""
    return (o.l - abs(o.m) + o.J) % 2


def solve_orbital(o: Orbital, Z: int, d: DeltaTriple,
                  xi: Optional[float] = None) -> HydrogenicSolution:
    """Строит решение для орбитали; без ``xi`` берётся собственный показатель.

    :param o: орбиталь (используются только квантовые числа)
    :param Z: заряд ядра
    :param d: тройка δ
    :param xi: вариационный показатель, если нужен
    :return: решение со всеми коэффициентами
    """
    ensure_valid_orbital(o if xi is None else o.with_xi(xi))
    T, L = t_and_l(o, d)
    xi_eigen, energy = eigen_xi_energy(o, Z, d)
    used = xi_eigen if xi is None else float(xi)
    return HydrogenicSolution(
        orbital=o,
        T=T,
        L=L,
        xi_eigen=xi_eigen,
        energy=energy,
        a_coeffs=tuple(angular_coeffs(o, d)),
        b_coeffs=tuple(radial_coeffs(o, d, used)),
        xi=used,
        sin_power=sin_power(o, d),
        radial_shift=radial_shift(o, d),
        cos_parity=cos_parity(o),
    )


def signed_power(x: float, power: float, parity: int) -> float:
    """sign(x)^parity·|x|^power — вещественная степень с целой чётностью."""
    value = abs(x) ** power if x != 0 else (1.0 if power == 0 else 0.0)
    return -value if (parity % 2 and x < 0) else value


def phi_part(m: int, phi: float) -> float:
    return math.cos(m * phi) if m >= 0 else math.sin(-m * phi)


def theta_part(solution: HydrogenicSolution, theta: float) -> float:
    sin_t = math.sin(theta)
    if sin_t <= 0 and solution.sin_power < 0:
        raise DomainError("θ на полюсе при отрицательном показателе sin θ")
    cos_t = math.cos(theta)
    total = 0.0
    for k, a in enumerate(solution.a_coeffs):
        total += a * signed_power(cos_t, solution.T - 2 * k, solution.cos_parity)
    return (sin_t ** solution.sin_power if sin_t > 0 else 0.0) * total


def radial_part(solution: HydrogenicSolution, r: float) -> float:
    if r <= 0:
        raise DomainError("r должно быть положительным")
    shift = solution.radial_shift - 0.5
    total = sum(b * r ** (k + shift) for k, b in enumerate(solution.b_coeffs))
    return total * math.exp(-solution.xi * r)


def eval_orbital(o: Orbital, d: DeltaTriple, point: Tuple[float, float, float],
                 Z: Optional[int] = None) -> float:
    """Ненормированное значение Φ(φ)·Θ(θ)·R(r) с показателем ``o.xi``.

    :param o: орбиталь
    :param d: тройка δ
    :param point: (r, θ, φ)
    :param Z: заряд ядра; по умолчанию берётся из тройки
    """
    r, theta, phi = point
    if not 0 < theta < math.pi:
        raise DomainError("θ должно лежать в (0, π)")
    solution = solve_orbital(o, d.z if Z is None else Z, d, xi=o.xi)
    return phi_part(o.m, phi) * theta_part(solution, theta) * radial_part(solution, r)


def angular_defect(o: Orbital, d: DeltaTriple) -> float:
    """(T − 2K)(T − 2K − 1) + 2δ2 для младшей степени cos θ, K = ⌊(l − |m|)/2⌋.

    Остаток θ-уравнения равен defect·a_K·sin^s θ·cos^(T−2K−2) θ. При
    чётном l − |m| defect порядка δ2², при нечётном l − |m| и J = 0 около 4δ2.
    """
    T, _ = t_and_l(o, d)
    lowest = T - 2 * ((o.l - abs(o.m)) // 2)
    return lowest * (lowest - 1) + 2 * d.d2


def ode_residual(o: Orbital, d: DeltaTriple, Z: int,
                 samples: Iterable[Tuple[float, float]], step: float = 1e-4) -> float:
    """Невязка разделённых уравнений для θ- и r-частей решения.

    Вторые производные берутся центральными разностями. Угловая невязка
    нормируется на max(1, |L(L+1)|)·|Θ|, радиальная на |E·R|. В угловую
    входит остаток замкнутой формы (см. :func:`angular_defect`).

    :param samples: пары (r, θ)
    :return: максимальная относительная невязка
    """
    solution = solve_orbital(o, Z, d)
    T, L = solution.T, solution.L
    worst = 0.0
    for r, theta in samples:
        f0 = theta_part(solution, theta)
        fp = theta_part(solution, theta + step)
        fm = theta_part(solution, theta - step)
        first = (fp - fm) / (2 * step)
        second = (fp - 2 * f0 + fm) / step ** 2
        sin_t, cos_t = math.sin(theta), math.cos(theta)
        angular = (second + cos_t / sin_t * first
                   - (o.m ** 2 + 2 * d.d1) / sin_t ** 2 * f0
                   + 2 * d.d2 / cos_t ** 2 * f0
                   + L * (L + 1) * f0)
        worst = max(worst, abs(angular) / (max(1.0, abs(L * (L + 1))) * abs(f0)))

        g0 = radial_part(solution, r)
        gp = radial_part(solution, r + step)
        gm = radial_part(solution, r - step)
        first_r = (gp - gm) / (2 * step)
        second_r = (gp - 2 * g0 + gm) / step ** 2
        radial = (second_r + 2 / r * first_r + 2 * Z / r * g0
                  - (L * (L + 1) - 2 * d.d3) / r ** 2 * g0
                  + 2 * solution.energy * g0)
        worst = max(worst, abs(radial) / (abs(solution.energy) * abs(g0)))
    return worst


def hydrogen_level_table(Z: int, d: Optional[DeltaTriple] = None,
                         levels: Sequence[Core] = HYDROGEN_LEVELS) -> List[float]:
    """ΔE уровней относительно (1,0,0,0,0) в порядке строк таблицы.

    :param Z: заряд ядра
    :param d: тройка δ; по умолчанию решается для Z
    :param levels: орбитали строк
    :return: список ΔE в хартри
    """
    d = solve_deltas(Z) if d is None else d
    ground = eigen_xi_energy(Orbital(1, 0, 0, 0, 0), Z, d)[1]
    return [eigen_xi_energy(Orbital(*core), Z, d)[1] - ground for core in levels]


def hyperfine_ratios(Z: int = 1) -> Tuple[float, float]:
    """Отношения расщепления 2S-уровней к эталону QED и к магнитному члену.

    :return: ((ΔE₄−ΔE₃)/(ΔE₄^QED−ΔE₃^QED), (ΔE₄−ΔE₃)/(E_M(2,0,0,1)−E_M(2,0,0,0)))
    """
    levels = hydrogen_level_table(Z)
    splitting = levels[3] - levels[2]
    qed_splitting = (qed_reference.qed_energy(2, 0, 0, 1, Z)
                     - qed_reference.qed_energy(2, 0, 0, 0, Z))
    magnetic_splitting = (qed_reference.magnetic_term(2, 0, 0, 1, Z)
                          - qed_reference.magnetic_term(2, 0, 0, 0, Z))
    return splitting / qed_splitting, splitting / magnetic_splitting
