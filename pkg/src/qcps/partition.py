"""Seed-distance grid partitioning of heterogeneous sensors."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import DuplicateNodeId
from .model import SensorNode, euclidean_distance

__all__ = ["Grid", "compute_grids", "label_nodes", "validate_threshold"]


@dataclass(frozen=True)
class Grid:
    """Type-homogeneous group of sensors.

    ``members`` keeps join order, so ``members[0]`` is always the seed node
    that every membership test is measured against.
    """

    grid_id: str
    sensor_type: str
    members: tuple[str, ...]
    coordinator: str | None = None

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError(f"grid {self.grid_id} has no members")
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"grid {self.grid_id} has duplicate members")
        if self.coordinator is not None and self.coordinator not in self.members:
            raise ValueError(f"grid {self.grid_id}: coordinator {self.coordinator} is not a member")

    @property
    def seed(self) -> str:
        return self.members[0]

    def with_coordinator(self, node_id: str) -> Grid:
        return replace(self, coordinator=node_id)


def validate_threshold(threshold: float) -> float:
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)):
        raise ValueError(f"threshold must be a number, got {threshold!r}")
    if not math.isfinite(threshold) or threshold <= 0:
        raise ValueError(f"threshold must be positive and finite, got {threshold!r}")
    return float(threshold)


def compute_grids(nodes: Sequence[SensorNode], threshold: float) -> list[Grid]:
    """Assign every node to exactly one grid, scanning ``nodes`` in order.

    A node joins the first grid (in creation order) of its own type whose seed
    lies strictly closer than ``threshold``; otherwise it founds a new grid
    named ``g<n>``. The result depends on input order by design.
    """
    threshold = validate_threshold(threshold)
    seen: set[str] = set()
    for node in nodes:
        if node.node_id in seen:
            raise DuplicateNodeId(f"duplicate node id {node.node_id!r}")
        seen.add(node.node_id)

    # (grid_id, sensor_type, seed node, members)
    building: list[tuple[str, str, SensorNode, list[str]]] = []
    for node in nodes:
        for _, sensor_type, seed, members in building:
            if sensor_type == node.sensor_type and euclidean_distance(seed.position, node.position) < threshold:
                members.append(node.node_id)
                break
        else:
            building.append((f"g{len(building) + 1}", node.sensor_type, node, [node.node_id]))

    return [Grid(gid, stype, tuple(members)) for gid, stype, _, members in building]


def label_nodes(nodes: Iterable[SensorNode], grids: Iterable[Grid]) -> list[SensorNode]:
    """Return copies of ``nodes`` carrying grid ids and coordinator flags from ``grids``."""
    grid_of: dict[str, Grid] = {}
    for grid in grids:
        for member in grid.members:
            grid_of[member] = grid
    labelled = []
    for node in nodes:
        grid = grid_of[node.node_id]
        labelled.append(node.with_grid(grid.grid_id, coordinator=grid.coordinator == node.node_id))
    return labelled
