"""Core domain types shared by every module.

Node ids and sensor types are plain strings. Python's string ordering is the
total order used for every deterministic tie-break downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "CLOUD",
    "Position",
    "Reading",
    "SensorNode",
    "euclidean_distance",
    "validate_node_id",
]

# Principal name of the cloud in messages and traces; reserved as a node id.
CLOUD = "cloud"


def validate_node_id(node_id: str) -> str:
    if not isinstance(node_id, str) or not node_id:
        raise ValueError(f"node id must be a non-empty string, got {node_id!r}")
    if any(ch.isspace() for ch in node_id):
        raise ValueError(f"node id {node_id!r} contains whitespace")
    if node_id == CLOUD:
        raise ValueError(f"node id {CLOUD!r} is reserved")
    return node_id


@dataclass(frozen=True)
class Position:
    """Point in 3D space, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for axis in ("x", "y", "z"):
            value = getattr(self, axis)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"coordinate {axis} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"coordinate {axis} is not finite: {value!r}")
            object.__setattr__(self, axis, float(value))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def translated(self, dx: float, dy: float, dz: float) -> Position:
        return Position(self.x + dx, self.y + dy, self.z + dz)


def euclidean_distance(a: Position, b: Position) -> float:
    return math.dist(a.as_tuple(), b.as_tuple())


@dataclass(frozen=True)
class SensorNode:
    """One sensor: id, type, grid id, physical location and coordinator flag.

    ``grid_id`` is ``None`` until partitioning has run.
    """

    node_id: str
    sensor_type: str
    position: Position
    grid_id: str | None = None
    coordinator: bool = False

    def __post_init__(self) -> None:
        validate_node_id(self.node_id)
        if not isinstance(self.sensor_type, str) or not self.sensor_type.strip():
            raise ValueError(f"node {self.node_id}: sensor type must be a non-empty string")
        if any(ch.isspace() for ch in self.sensor_type):
            raise ValueError(f"node {self.node_id}: sensor type {self.sensor_type!r} contains whitespace")
        if self.coordinator and self.grid_id is None:
            raise ValueError(f"node {self.node_id}: coordinator flag set without a grid")

    def with_grid(self, grid_id: str, coordinator: bool = False) -> SensorNode:
        return replace(self, grid_id=grid_id, coordinator=coordinator)


@dataclass(frozen=True)
class Reading:
    node_id: str
    sim_time: float
    value: float
    unit: str = ""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sim_time) and self.sim_time >= 0):
            raise ValueError(f"reading time must be finite and non-negative, got {self.sim_time!r}")
        if not math.isfinite(self.value):
            raise ValueError(f"reading value must be finite, got {self.value!r}")
        object.__setattr__(self, "sim_time", float(self.sim_time))
        object.__setattr__(self, "value", float(self.value))
