import random

import pytest
from hypothesis import HealthCheck, settings

from polyprog.fixtures import interpretation, program

settings.register_profile("polyprog", deadline=None, derandomize=True, database=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("polyprog")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240601,
                     help="seed for the randomized corpora used by the property tests")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


@pytest.fixture(scope="session")
def division():
    return program("division")


@pytest.fixture(scope="session")
def sort_program():
    return program("sort")


@pytest.fixture(scope="session")
def arith():
    return program("arith")


@pytest.fixture(scope="session")
def programs(division, sort_program, arith):
    return {"division": division, "sort": sort_program, "arith": arith}


@pytest.fixture(scope="session")
def certified(programs):
    """Each bundled program with an interpretation that certifies it."""
    return {
        "division": interpretation("division", programs["division"], strict=True),
        "sort": interpretation("sort", programs["sort"], strict=True),
        "arith": interpretation("arith", programs["arith"]),
    }


@pytest.fixture(scope="session")
def acceptance_log(request):
    log = []
    request.config._acceptance_log = log
    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = getattr(config, "_acceptance_log", None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(log):
        terminalreporter.write_line(line)
