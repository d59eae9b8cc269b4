from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from clustcompare import Clustering, from_clusters


def sets_of(clustering: Clustering) -> list[frozenset[int]]:
    return list(clustering.clusters)


def random_clustering(rng: np.random.Generator, n: int, max_k: int | None = None) -> Clustering:
    k = int(rng.integers(1, (max_k or n) + 1))
    return Clustering(rng.integers(0, k, size=n))


@st.composite
def clusterings(draw, min_n=1, max_n=12, n=None):
    n = n if n is not None else draw(st.integers(min_n, max_n))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return Clustering(labels)


@st.composite
def clustering_pairs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    return draw(clusterings(n=n)), draw(clusterings(n=n))


@pytest.fixture
def five():
    """The running n = 5 example: {{1,2,3},{4,5}} vs {{1,2},{3,4},{5}}."""
    return from_clusters([[1, 2, 3], [4, 5]]), from_clusters([[1, 2], [3, 4], [5]])


@pytest.fixture
def two_components():
    return from_clusters([[1, 2], [3], [4, 5]]), from_clusters([[1, 2], [3, 4, 5]])


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "failed": []})
    if call.excinfo is not None:
        entry["passed"] = False
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["passed"] else "FAIL"
        line = f"[{status}] {number:>2}. {entry['title']}"
        if entry["failed"]:
            line += f"  (failing: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
