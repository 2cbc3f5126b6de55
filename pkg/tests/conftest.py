import json
from pathlib import Path

import pytest
from hypothesis import strategies as st

from ncstflip.fuss_dyck import DyckPath
from ncstflip.ncst import make_tree, parse_tree

DATA = Path(__file__).parent / "data"

# worked example: 7-edge path and its tree
EXAMPLE_PATH = DyckPath("UUUUDUDUUDUUUUDUDDUUD")
EXAMPLE_TREE = make_tree(7, [(0, 1), (0, 2), (2, 3), (4, 5), (4, 6), (6, 7), (0, 6)])


@pytest.fixture(scope="session")
def walk_triple():
    raw = json.loads((DATA / "walk_triple.json").read_text())
    out = {}
    for key in ("W1", "W2", "W3"):
        out[key] = (DyckPath(raw[key]["path"]), parse_tree(raw[key]["tree"]))
    out["swaps"] = {k: tuple(v) for k, v in raw["swaps"].items()}
    return out


@pytest.fixture
def example_tree():
    return EXAMPLE_TREE


@pytest.fixture
def example_path():
    return EXAMPLE_PATH


@st.composite
def dyck_paths(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    steps, h, ups, downs = [], 0, 0, 0
    while ups < 2 * n or downs < n:
        options = []
        if ups < 2 * n:
            options.append("U")
        if downs < n and h >= 2:
            options.append("D")
        c = draw(st.sampled_from(options))
        steps.append(c)
        if c == "U":
            ups, h = ups + 1, h + 1
        else:
            downs, h = downs + 1, h - 2
    return DyckPath("".join(steps))


# -- acceptance reporting -------------------------------------------------------------

_criteria: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    # a skipped acceptance test counts as a failure
    ok = not (report.failed or report.skipped)
    for n in getattr(report, "_criterion", ()):
        _criteria[n] = _criteria.get(n, True) and ok


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    report._criterion = [m.args[0] for m in item.iter_markers("criterion")]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _criteria[n] else 'FAIL'}")
