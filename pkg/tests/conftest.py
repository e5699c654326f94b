import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import settings  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance reporting ------------------------------------------------------------

_criteria: dict[str, tuple[str, str, float]] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    key, label = marker
    if report.when == "call" or report.outcome != "passed":
        prev = _criteria.get(key)
        if prev is None or prev[1] == "PASS":
            verdict = "PASS" if report.outcome == "passed" else "FAIL"
            if report.outcome == "skipped":
                verdict = "SKIP"
            _criteria[key] = (label, verdict, report.duration)


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
    for key in sorted(_criteria):
        label, verdict, seconds = _criteria[key]
        terminalreporter.write_line(f"{verdict} [{key}] {label} ({seconds:.1f}s)")
