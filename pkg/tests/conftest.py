from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from qcps import Position, SensorNode, load_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
PAPER8 = FIXTURES / "paper8.scenario"
PAPER8_COMPARE = FIXTURES / "paper8_compare.scenario"

PAPER8_NODES = [
    ("A", "environment", (30, 40, 10)),
    ("B", "activity", (40, 20, 70)),
    ("C", "activity", (50, 70, 120)),
    ("D", "environment", (70, 80, 100)),
    ("E", "environment", (80, 15, 110)),
    ("F", "activity", (65, 60, 150)),
    ("G", "activity", (130, 70, 160)),
    ("H", "environment", (72, 78, 90)),
]

SENSOR_TYPES = ["environment", "activity", "electric", "mechanical", "biological"]


def make_nodes(spec) -> list[SensorNode]:
    return [SensorNode(i, t, Position(*xyz)) for i, t, xyz in spec]


@pytest.fixture
def paper8_nodes() -> list[SensorNode]:
    return make_nodes(PAPER8_NODES)


@pytest.fixture
def paper8():
    return load_scenario(PAPER8)


@pytest.fixture
def paper8_compare():
    return load_scenario(PAPER8_COMPARE)


coordinate = st.integers(min_value=0, max_value=200)
int_positions = st.builds(Position, coordinate, coordinate, coordinate)


@st.composite
def node_lists(draw, min_size=0, max_size=50, types=SENSOR_TYPES[:3], unique_positions=False):
    """Random node lists, ids n0..n{k-1}, integer coordinates in [0, 200]^3."""
    pos_strategy = st.tuples(coordinate, coordinate, coordinate)
    positions = draw(st.lists(pos_strategy, min_size=min_size, max_size=max_size, unique=unique_positions))
    kinds = draw(st.lists(st.sampled_from(types), min_size=len(positions), max_size=len(positions)))
    return [SensorNode(f"n{i:02d}", t, Position(*p)) for i, (p, t) in enumerate(zip(positions, kinds))]


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call" or report.failed:
        if report.failed or name not in _acceptance:
            _acceptance[name] = "FAIL" if report.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{outcome}  {name}")
