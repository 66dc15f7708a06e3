import os
from itertools import combinations, product

import pytest

from grwalks.driver import SolverSpec
from grwalks.walk import is_gr


# criterion number -> [description, outcomes of its tests]
_CRITERIA = {}


def pytest_collection_modifyitems(config, items):
    if os.environ.get("GRWALKS_LONG"):
        return
    skip = pytest.mark.skip(reason="multi-hour run; set GRWALKS_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, text = mark.args
    entry = _CRITERIA.setdefault(num, [text, []])
    if rep.skipped:
        entry[1].append("SKIP")
    elif rep.failed:
        entry[1].append("FAIL")
    elif rep.when == "call":
        entry[1].append("PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        text, results = _CRITERIA[num]
        if "FAIL" in results:
            verdict = "FAIL"
        elif "PASS" in results:
            verdict = "PASS" + (" (opt-in parts skipped)" if "SKIP" in results else "")
        else:
            verdict = "SKIP"
        terminalreporter.write_line(f"criterion {num:>2}: {verdict:<4} {text}")


def external_spec(dialect):
    """Reference solver, or the command template in GRWALKS_SOLVER."""
    cmd = os.environ.get("GRWALKS_SOLVER")
    if cmd:
        return SolverSpec(cmd, dialect, timeout=600)
    return SolverSpec.reference(dialect, timeout=600)


@pytest.fixture(scope="session")
def cnf_solver():
    return external_spec("cnf")


@pytest.fixture(scope="session")
def knf_solver():
    return SolverSpec.reference("knf", timeout=600)


def brute_walks(k, m, north_first=False):
    """All m-step GR(k) walks by trying every N/E string."""
    out = []
    for steps in product("NE", repeat=m):
        w = "".join(steps)
        if north_first and w and w[0] != "N":
            continue
        if is_gr(w, k):
            out.append(w)
    return sorted(out)


def collinear_by_cross_product(points, k):
    """True if some k of the points are collinear (checked directly)."""
    for combo in combinations(points, k):
        (x0, y0), (x1, y1) = combo[0], combo[1]
        if all((x1 - x0) * (y - y0) == (y1 - y0) * (x - x0) for x, y in combo[2:]):
            return True
    return False
