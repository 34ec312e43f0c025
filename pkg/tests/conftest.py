"""Shared fixtures and the per-criterion acceptance report."""
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

_criteria = {}   # id -> [title, passed]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    cid, title = marker
    entry = _criteria.setdefault(cid, [title, True])
    if report.failed:
        entry[1] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=lambda c: int(c[2:])):
        title, passed = _criteria[cid]
        terminalreporter.write_line(f"{cid} {'PASS' if passed else 'FAIL'}  {title}")

