import warnings

import pytest

from plumbdga.plumbing import PlumbingGraph

G = PlumbingGraph

CORPUS = {
    "A1": G(1),
    "A2": G(2, [(1, 2)], {0}),
    "A3": G(3, [(1, 2), (2, 3)], {0, 1}),
    "A4": G(4, [(1, 2), (2, 3), (3, 4)], {0, 1, 2}),
    "D4": G(4, [(1, 2), (1, 3), (1, 4)], {0, 1, 2}),
    "C3": G(3, [(1, 2), (2, 3), (3, 1)], {0, 1}),
    "double_edge": G(2, [(1, 2), (1, 2)], {0}),
    "loop": G(1, [(1, 1)]),
    "double_loop": G(1, [(1, 1), (1, 1)]),
    "genus1": G(1, genus=(1,)),
    "genus2": G(1, genus=(2,)),
    "A2_genus11": G(2, [(1, 2)], {0}, (1, 1)),
    "A2_loop_genus21": G(2, [(1, 2), (2, 2)], {0}, (2, 1)),
    "C3_mixed": G(3, [(3, 1), (1, 2), (2, 3)], {1, 2}, (1, 0, 2)),
}

TREES = {k: CORPUS[k] for k in ("A2", "A3", "A4", "D4")}

_acceptance_lines = []


@pytest.fixture
def record_criterion():
    """Register a pass/fail line for the acceptance summary."""

    def record(number, title, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number:2d}: {title}"
        if detail:
            line += f" ({detail})"
        _acceptance_lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_acceptance_lines):
        terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _quiet_reorder_warnings():
    from plumbdga.plumbing import EdgeOrderWarning
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EdgeOrderWarning)
        yield
