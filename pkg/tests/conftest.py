from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gpstruct.graph import Graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@st.composite
def graphs(draw, min_n=0, max_n=8, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())] if pairs else []
    if connected and n > 1:
        # hang every vertex off an earlier one so the graph is connected
        edges += [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    return Graph.from_edges(n, set(edges))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


_criteria: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_") or report.when == "teardown":
        return
    num = int(name.split("_")[2])
    ok = report.passed or (report.when == "setup" and report.skipped)
    if report.when == "setup" and report.passed:
        return
    _criteria[num] = _criteria.get(num, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if _criteria[num] else 'FAIL'}")
