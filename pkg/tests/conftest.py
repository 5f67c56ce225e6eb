import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": 0, "failed": 0})
    entry["failed" if report.failed else "passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["failed"] == 0 else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {entry['title']}")


@pytest.fixture(scope="session")
def polygon_censuses():
    """Labeled polygon censuses for n = 4..13 with their build times."""
    import time

    from flipforge.census import build_quotient
    from flipforge.surface import SurfaceSig

    out = {}
    for n in range(4, 14):
        start = time.perf_counter()
        rep = build_quotient(SurfaceSig(0, 1, 0, n))
        out[n] = (rep, time.perf_counter() - start)
    return out


SMALL_CENSUS_SIGNATURES = [
    # (g, b, s, p, labeled)
    (1, 0, 1, 0, True), (1, 0, 1, 0, False),
    (1, 1, 0, 1, True), (1, 1, 0, 1, False),
    (1, 1, 0, 2, True), (1, 1, 0, 2, False), (1, 1, 0, 3, True),
    (0, 2, 0, 2, True), (0, 2, 0, 3, True), (1, 2, 0, 2, True),
    (0, 1, 1, 1, True), (0, 1, 2, 1, True), (0, 1, 2, 1, False),
    (0, 1, 3, 1, True), (0, 1, 3, 1, False), (0, 1, 4, 1, True), (0, 1, 4, 1, False),
    (0, 1, 5, 1, False), (0, 1, 2, 2, True),
    (2, 1, 0, 1, True), (2, 1, 0, 1, False),
    (0, 0, 4, 0, True), (0, 0, 4, 0, False), (0, 0, 5, 0, True), (0, 0, 5, 0, False),
    (1, 0, 2, 0, True), (1, 0, 2, 0, False),
]


@pytest.fixture(scope="session")
def small_censuses():
    from flipforge.census import build_quotient
    from flipforge.surface import SurfaceSig

    return {sig: build_quotient(SurfaceSig(*sig)) for sig in SMALL_CENSUS_SIGNATURES}
