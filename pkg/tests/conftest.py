import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fixtures():
    from iskit.catalog import standard_fixtures
    return standard_fixtures()


@pytest.fixture(scope="session")
def small():
    from iskit.catalog import small_fixtures
    return small_fixtures(12)


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.failed:
        _criteria[name] = "FAIL"
    elif report.when == "call":
        _criteria.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        number, label = name[len("test_criterion_"):].split("_", 1)
        terminalreporter.write_line(f"{_criteria[name]} criterion {int(number)}: {label.replace('_', ' ')}")
