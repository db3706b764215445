"""Числовые параметры расчёта.

Параметры хранятся в словаре ``CONFIG`` по аналогии с конфигурацией
приложения: модули читают значения через :func:`get_setting`, а CLI
переопределяет их через :func:`update_settings` до запуска команды.
"""

from contextlib import contextmanager
from typing import Any, Dict, Iterator
import logging
import os

logger = logging.getLogger(__name__)

DATA_FOLDER = os.path.join(os.path.dirname(__file__), 'data')

DEFAULTS: Dict[str, Any] = {
    # ряды Y_III
    'series_tolerance': 1e-12,
    'series_max_terms': 200,
    'series_growth_limit': 3,
    # допуск на нецелые угловые показатели второго электрона
    'integer_tolerance': 1e-9,
    'functional_integer_tolerance': 1e-4,
    # кэш интегралов
    'xi_key_digits': 12,
    # функционал энергии
    'zero_norm_threshold': 1e-12,
    'overlap_zero_threshold': 1e-6,
    # квадратурный оракул
    'oracle_tolerance': 1e-8,
    'oracle_cutoff': 40.0,
    'oracle_max_levels': 6,
    # минимизация
    'tol_f': 1e-9,
    'tol_x': 1e-7,
    'restarts': 5,
    'max_evals': 20000,
    'jitter': 0.1,
    'seed': 0,
    # вывод
    'float_digits': 10,
}

CONFIG: Dict[str, Any] = dict(DEFAULTS)


def get_setting(name: str) -> Any:
    """Возвращает текущее значение параметра.

    :param name: имя параметра из ``DEFAULTS``
    :return: значение
    """
    return CONFIG[name]


def update_settings(**overrides: Any) -> None:
    """Переопределяет параметры; неизвестные имена вызывают ``KeyError``."""
    for key, value in overrides.items():
        if key not in DEFAULTS:
            raise KeyError(f"Неизвестный параметр: {key}")
        logger.debug("параметр %s = %r", key, value)
        CONFIG[key] = value


def reset_settings() -> None:
    """Возвращает значения по умолчанию."""
    CONFIG.clear()
    CONFIG.update(DEFAULTS)


@contextmanager
def settings_override(**overrides: Any) -> Iterator[None]:
    """Временно переопределяет параметры (удобно в тестах)."""
    saved = dict(CONFIG)
    update_settings(**overrides)
    try:
        yield
    finally:
        CONFIG.clear()
        CONFIG.update(saved)
