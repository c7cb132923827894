import sys
from pathlib import Path

import pytest

from mesp import io

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

CORPUS = sorted(p.stem for p in FIXTURES.glob("*.json"))


def load(name):
    return io.parse_instance((FIXTURES / f"{name}.json").read_text())


@pytest.fixture(params=CORPUS)
def corpus_instance(request):
    return request.param, load(request.param)


@pytest.fixture
def i1():
    return load("i1")


@pytest.fixture
def i2():
    return load("i2")


@pytest.fixture
def s1():
    return load("s1")


@pytest.fixture
def s2():
    return load("s2")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
