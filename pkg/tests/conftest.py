import pytest
from hypothesis import strategies as st

from finlift.space import MapF, Space, hom


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@st.composite
def spaces(draw, max_n=4):
    n = draw(st.integers(0, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))),
                          max_size=n * n)) if n else []
    return Space.from_pairs(n, pairs)


@st.composite
def maps(draw, max_n=3):
    A = draw(spaces(max_n))
    B = draw(spaces(max_n).filter(lambda B: B.n > 0 or A.n == 0))
    H = hom(A, B)
    return MapF(A, B, draw(st.sampled_from(H)))


ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Record one pass/fail line for the acceptance summary."""
    def rec(number: int, title: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
