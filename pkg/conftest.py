"""
Shared pytest configuration.

Optimizer-driven table reproduction and the odd-sine Y_III series are
marked ``slow`` and skipped unless ``--run-slow`` is given.  Numeric
settings are reset after every test so that overrides made by one test
never leak into another.
"""
import pytest

from modules.settings import reset_settings


def pytest_addoption(parser):
    parser.addoption('--run-slow', action='store_true', default=False,
                     help='run slow tests')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: optimizer-driven tables and odd-sine series (needs --run-slow)')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--run-slow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --run-slow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _fresh_settings():
    yield
    reset_settings()
