import random
from fractions import Fraction

import pytest

from coboson_stats import ModeProfile, random_rational_profile, uniform_profile

_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _criterion_of.get(report.nodeid)
    if marker is None:
        return
    num, title = marker
    entry = _criteria.setdefault(num, {"title": title, "passed": 0, "failed": 0})
    entry["passed" if report.passed else "failed"] += 1


_criterion_of = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_of[item.nodeid] = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        e = _criteria[num]
        status = "PASS" if e["failed"] == 0 else "FAIL"
        terminalreporter.write_line(
            f"AC{num:<3} {status}  {e['title']}  ({e['passed']} passed, {e['failed']} failed)")


@pytest.fixture
def uniform4():
    return uniform_profile(4)


@pytest.fixture
def skewed():
    """p = (1/2, 1/4, 1/4)."""
    return ModeProfile((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)), "skewed")


def random_profiles(count, max_modes, seed, min_modes=1):
    rng = random.Random(seed)
    return [random_rational_profile(rng.randint(min_modes, max_modes), rng, label=f"r{i}")
            for i in range(count)]
