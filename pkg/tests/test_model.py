import math

import pytest
from hypothesis import given, settings

from qcps import Position, Reading, SensorNode, euclidean_distance
from qcps.model import validate_node_id

from .conftest import int_positions


def test_distance_examples():
    a = Position(30, 40, 10)
    # 50^2 + 25^2 + 100^2 = 13125 ; 40^2 + 40^2 + 90^2 = 11300
    assert euclidean_distance(a, Position(80, 15, 110)) == pytest.approx(114.5644, abs=1e-4)
    assert euclidean_distance(a, Position(70, 80, 100)) == pytest.approx(106.3015, abs=1e-4)
    assert euclidean_distance(a, Position(80, 15, 110)) == pytest.approx(math.sqrt(13125), rel=1e-15)
    assert euclidean_distance(a, a) == 0.0


@settings(max_examples=200)
@given(int_positions, int_positions)
def test_distance_symmetric_and_zero_iff_equal(a, b):
    assert euclidean_distance(a, b) == euclidean_distance(b, a)
    assert (euclidean_distance(a, b) == 0) == (a == b)


@settings(max_examples=200)
@given(int_positions, int_positions, int_positions)
def test_triangle_inequality(a, b, c):
    assert euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), "3", None, True])
def test_position_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        Position(bad, 0, 0)


def test_node_flags():
    node = SensorNode("A", "environment", Position(0, 0, 0))
    assert node.grid_id is None and not node.coordinator
    with pytest.raises(ValueError):
        SensorNode("A", "environment", Position(0, 0, 0), coordinator=True)
    labelled = node.with_grid("g1", coordinator=True)
    assert labelled.grid_id == "g1" and labelled.coordinator


@pytest.mark.parametrize("bad", ["", "a b", "cloud", 7])
def test_invalid_node_ids(bad):
    with pytest.raises(ValueError):
        validate_node_id(bad)


def test_node_id_order_is_total():
    ids = ["B", "A", "a", "A1", "AA"]
    assert sorted(ids) == ["A", "A1", "AA", "B", "a"]


def test_reading_validation():
    Reading("A", 0.0, 1.0)
    with pytest.raises(ValueError):
        Reading("A", -1.0, 1.0)
    with pytest.raises(ValueError):
        Reading("A", 0.0, float("nan"))
