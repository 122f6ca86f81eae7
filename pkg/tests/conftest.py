from __future__ import annotations

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from momentbounds import moments  # noqa: E402
from momentbounds.bounds import SupportBounds  # noqa: E402
from momentbounds.sweep import SweepConfig, run_sweep  # noqa: E402

# Every DiscreteDistribution built in this process, for the Pearson-floor sweep.
CREATED: list = []

_original_post_init = moments.DiscreteDistribution.__post_init__


def _recording_post_init(self) -> None:
    _original_post_init(self)
    CREATED.append(self)


moments.DiscreteDistribution.__post_init__ = _recording_post_init

DESK_CONFIG = SweepConfig(
    support=SupportBounds(0.0, 5.0),
    mean=1.0,
    orders=(3, 4, 5),
    bins=50,
    samples_per_bin=2000,
    k_values=(2, 3, 4),
    seed=20240611,
)


@pytest.fixture(scope="session")
def desk_sweep():
    """Desk-scale sweep run once per session, single process, with its wall time."""
    start = time.perf_counter()
    records = run_sweep(DESK_CONFIG, workers=1)
    return records, time.perf_counter() - start


_criteria: dict[str, tuple[int, str]] = {}
_outcomes: dict[int, str] = {}


def pytest_collection_modifyitems(session, config, items):
    first = [it for it in items if it.get_closest_marker("run_last") is None]
    last = [it for it in items if it.get_closest_marker("run_last") is not None]
    items[:] = first + last
    for it in items:
        mark = it.get_closest_marker("acceptance")
        if mark is not None:
            _criteria[it.nodeid] = (mark.args[0], mark.args[1])


def pytest_runtest_logreport(report):
    crit = _criteria.get(report.nodeid)
    if crit is None:
        return
    number = crit[0]
    if report.failed:
        _outcomes[number] = "FAIL"
    elif report.when == "call" and report.passed:
        _outcomes.setdefault(number, "PASS")
    elif report.skipped:
        _outcomes.setdefault(number, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in sorted(set(_criteria.values())):
        status = _outcomes.get(number, "NOT RUN")
        terminalreporter.write_line(f"AC{number:<3d}{status:<8s}{title}")
