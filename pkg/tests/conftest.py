import pytest

from starmaps import skeleton as sk

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def terminal():
    return sk.terminal(2)


@pytest.fixture
def flip_graph():
    """One vertex; a1 b = b a2 and a2 b = b a1.  A valid, 1-coaligned 2-graph."""
    return sk.from_parts(
        2,
        ["v"],
        [("a1", 1, "v", "v"), ("a2", 1, "v", "v"), ("b", 2, "v", "v")],
        [(1, 2, "a1", "b", "b", "a2"), (1, 2, "a2", "b", "b", "a1")],
    )


@pytest.fixture
def twisted():
    """Valid 2-graph on one vertex that is not 1-coaligned.

    The pair (a1, b1) has two commuting completions, (a2, b2) has two, and
    (a1, b2), (a2, b1) have none.
    """
    return sk.from_parts(
        2,
        ["v"],
        [("a1", 1, "v", "v"), ("a2", 1, "v", "v"), ("b1", 2, "v", "v"), ("b2", 2, "v", "v")],
        [
            (1, 2, "a1", "b1", "b1", "a1"),
            (1, 2, "a1", "b2", "b1", "a2"),
            (1, 2, "a2", "b1", "b2", "a1"),
            (1, 2, "a2", "b2", "b2", "a2"),
        ],
    )


@pytest.fixture
def double_square():
    """Two vertices; the composable pair (au, bu) lies in two squares."""
    return sk.from_parts(
        2,
        ["u", "v"],
        [
            ("au", 1, "u", "u"),
            ("au2", 1, "u", "u"),
            ("bu", 2, "u", "u"),
            ("av", 1, "v", "v"),
            ("bv", 2, "v", "v"),
        ],
        [
            (1, 2, "au", "bu", "bu", "au"),
            (1, 2, "au2", "bu", "bu", "au2"),
            (1, 2, "au", "bu", "bu", "au2"),
            (1, 2, "av", "bv", "bv", "av"),
        ],
    )
