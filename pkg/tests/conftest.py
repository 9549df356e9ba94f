from pathlib import Path

import pytest

from linkvol.diagram import iter_batch

DATA = Path(__file__).parent / "data"

TREFOIL = "X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)"
FIGURE_EIGHT = "X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)"


def load_corpus(name="alternating.txt"):
    out = {}
    for _, label, d, err in iter_batch((DATA / name).read_text().splitlines()):
        assert err is None, f"{label}: {err}"
        out[label] = d
    return out


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
