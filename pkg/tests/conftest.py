import random

import pytest

from charcoords.exact import NumberField
from charcoords.manifold import load_builtin


@pytest.fixture(scope="session")
def gauss():
    return NumberField([1, 0, 1], "i")


@pytest.fixture(scope="session")
def fig8():
    return load_builtin("fig8")


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    from importlib import import_module

    try:
        acceptance = import_module("test_acceptance")
    except ImportError:
        return
    if not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(acceptance.RESULTS):
        ok, detail = acceptance.RESULTS[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
