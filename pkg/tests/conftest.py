import os

import pytest
from hypothesis import HealthCheck, settings

from canonlab import corpus, linalg
from canonlab.curve import BranchPoint, Component, NodalCurve, Node, check_valid

settings.register_profile(
    "canonlab", deadline=None, derandomize=True, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "canonlab"))


def make_curve(components, nodes, name="test"):
    """``nodes`` are ``(id, comp_a, t_a, comp_b, t_b)``."""
    comps = tuple(Component(c) for c in components)
    ns = tuple(Node(nid, BranchPoint(a, ta), BranchPoint(b, tb)) for nid, a, ta, b, tb in nodes)
    return NodalCurve(comps, ns, name)


@pytest.fixture
def two_node_curve():
    """Two genus-2 components (two self-nodes each) meeting at two nodes."""
    return check_valid(corpus.chain(2, 2, (2, 2), seed=0))


@pytest.fixture(autouse=True)
def _clean_audit():
    linalg.MODP_AUDIT.reset()
    yield
    linalg.MODP_AUDIT.reset()


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
