import numpy as np
import pytest

from qdeform.chain import ChainShape, build_interval
from qdeform.quiver import Quiver, Representation, direct_sum

_OUTCOMES = {}


def pytest_runtest_logreport(report):
    if report.when == "call" or report.failed:
        if "acceptance" in report.keywords:
            prev = _OUTCOMES.get(report.nodeid, True)
            _OUTCOMES[report.nodeid] = prev and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, ok in _OUTCOMES.items():
        name = nodeid.rsplit("::", 1)[-1]
        terminalreporter.write_line(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def loop_quiver():
    return Quiver.from_edges(1, [(1, 1)])


@pytest.fixture
def jordan2(loop_quiver):
    return Representation(loop_quiver, [2], [np.array([[0.0, 1.0], [0.0, 0.0]])])


@pytest.fixture
def chain_ff_pair():
    """``L12 + L23`` on ``1 -> 2 -> 3``: matrices ``[1; 0]`` and ``[0 1]``."""
    shape = ChainShape.from_string("FF")
    return direct_sum(build_interval(shape, (1, 2)), build_interval(shape, (2, 3)))
