"""Модульный пакет модели сверхтонкой структуры.

Каждый модуль реализует отдельную часть расчёта: квантовые числа и
конфигурации, эталонные энергии QED, водородоподобные решения с
поправками δ, одно- и двухэлектронные интегралы, функционал энергии,
минимизацию по показателям ξ и воспроизведение таблиц.
"""

from . import errors  # noqa: F401
from . import settings  # noqa: F401
from . import quantum_model  # noqa: F401
from . import qed_reference  # noqa: F401
from . import delta_hydrogenic  # noqa: F401
from . import special_integrals  # noqa: F401
from . import quadrature  # noqa: F401
from . import integral_engine  # noqa: F401
from . import energy_functional  # noqa: F401
from . import variational_optimizer  # noqa: F401
from . import spectra_harness  # noqa: F401
