"""Исключения расчётного пакета.

Каждое исключение наследует и общий базовый класс, и подходящий
встроенный тип, поэтому вызывающий код может перехватывать как
``HyperfineError``, так и, например, ``ValueError``.
"""

from typing import Optional


class HyperfineError(Exception):
    """Базовый класс ошибок пакета."""


class DomainError(HyperfineError, ValueError):
    """Аргумент вне области определения (отрицательный подкоренной
    аргумент, недопустимые квантовые числа, полюс сферы и т. п.)."""


class SeriesDivergenceError(HyperfineError, ArithmeticError):
    """Члены ряда растут и суммирование прекращено."""


class DivergentTermError(SeriesDivergenceError):
    """Отдельный член разложения вне области сходимости интеграла."""


class ToleranceNotMetError(HyperfineError, RuntimeError):
    """Квадратура не достигла требуемой точности."""


class ZeroNormError(HyperfineError, ArithmeticError):
    """Норма пробной функции практически равна нулю."""


class _LineError(HyperfineError, ValueError):
    """Ошибка разбора текста с привязкой к номеру строки."""

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f"строка {line_number}: {message}"
        super().__init__(message)


class ConfigurationFormatError(_LineError):
    """Ошибка в текстовом описании конфигурации."""


class ReferenceDataError(_LineError):
    """Ошибка в CSV со справочными уровнями (формат или дубликат)."""
