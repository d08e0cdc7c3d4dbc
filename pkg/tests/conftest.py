import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "square-in-square: embeddable YES, face pair E-incompatible NO",
    2: "triangle in 12-gon: E(K)-compatible YES, E-incompatible pair found",
    3: "square/tetrahedron tensor equality, PR box CHSH 4, steering flips with ambient",
    4: "steering verdict equals prep-NC verdict on 100 random scenarios",
    5: "hierarchy E-compat => embeddable => E(K)-compat; embeddable iff simplex",
    6: "Bloch polytope bracket of the three-setting threshold",
    7: "every YES certificate and NO Farkas witness re-verifies",
    8: "double description, LP witnesses and evaluation channel identity",
}

_results: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "slow: long-running acceptance check")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    n = getattr(report, "criterion", None)
    if n is None:
        return
    if report.failed:
        _results[n] = "FAIL"
    else:
        _results.setdefault(n, "PASS")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        status = _results.get(n, "NOT RUN")
        terminalreporter.write_line(f"criterion {n}: {status}  {CRITERIA[n]}")
