import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_int = st.integers(min_value=1, max_value=40)
positive_rational = st.builds(Fraction, small_int, st.integers(min_value=1, max_value=12))


@st.composite
def triangle_coords(draw):
    """(p, r, h) with 0 < r <= p/2 and h < 1.7 r, so p is the longest side."""
    p = draw(positive_rational)
    r = p * draw(st.builds(Fraction, st.integers(1, 12), st.integers(24, 48)))
    h = r * draw(st.builds(Fraction, st.integers(1, 17), st.just(10)))
    return p, r, h


_SESSION_START = time.perf_counter()
SUITE_BUDGET_S = 60.0


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


CRITERIA: dict[int, tuple[str, bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    report = outcome.get_result()
    num, title = marker.args
    if report.when == "call" or not report.passed:
        prior = CRITERIA.get(num, (title, True))[1]
        CRITERIA[num] = (title, prior and report.passed)


def pytest_terminal_summary(terminalreporter):
    results = CRITERIA
    if not results:
        return
    elapsed = time.perf_counter() - _SESSION_START
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        title, ok = results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}")
    ok = elapsed < SUITE_BUDGET_S
    terminalreporter.write_line(f"suite wall time: {'PASS' if ok else 'FAIL'}  {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")
