import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bihom import corpus  # noqa: E402


@pytest.fixture(scope="session")
def algebras():
    return {n: corpus.load(n) for n in corpus.ALGEBRAS}


@pytest.fixture(scope="session")
def adjoints(algebras):
    return {n: corpus.load_adjoint(n, A) for n, A in algebras.items()}


@pytest.fixture(scope="session")
def t4(algebras):
    return algebras["t4"]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_criteria: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    name = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[name] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _criteria.items():
        terminalreporter.write_line(f"{status}  {name}")
