import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


@pytest.fixture(scope="session")
def k2():
    from heyting.universal import complete_fragment
    return complete_fragment(2, 2)


@pytest.fixture(scope="session")
def k1():
    from heyting.universal import complete_fragment
    return complete_fragment(1, 8)


CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    k, title = mark.args
    if rep.failed or k not in CRITERIA:
        CRITERIA[k] = ("FAIL" if rep.failed else "PASS", title)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        verdict, title = CRITERIA[k]
        terminalreporter.write_line(f"{verdict} criterion {k}: {title}")
