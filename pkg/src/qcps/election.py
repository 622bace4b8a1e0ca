"""Centroid computation and nearest-to-centroid coordinator election."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import MissingPosition
from .model import Position
from .partition import Grid

__all__ = ["Centroid", "centroid", "elect_coordinator", "elect_all"]


@dataclass(frozen=True)
class Centroid:
    grid_id: str
    point: Position


def _member_positions(grid: Grid, positions: Mapping[str, Position]) -> list[Position]:
    missing = [m for m in grid.members if m not in positions]
    if missing:
        raise MissingPosition(f"grid {grid.grid_id}: no position for {', '.join(missing)}")
    return [positions[m] for m in grid.members]


def _exact_mean(points: Sequence[Position]) -> tuple[Fraction, Fraction, Fraction]:
    k = len(points)
    return (
        sum((Fraction(p.x) for p in points), Fraction(0)) / k,
        sum((Fraction(p.y) for p in points), Fraction(0)) / k,
        sum((Fraction(p.z) for p in points), Fraction(0)) / k,
    )


def centroid(grid: Grid, positions: Mapping[str, Position]) -> Centroid:
    """Per-axis arithmetic mean of the member positions.

    The mean is computed exactly and rounded once, so the result never leaves
    the members' bounding box.
    """
    cx, cy, cz = _exact_mean(_member_positions(grid, positions))
    return Centroid(grid.grid_id, Position(float(cx), float(cy), float(cz)))


def elect_coordinator(grid: Grid, positions: Mapping[str, Position]) -> str:
    """Member nearest the centroid; equal distances go to the smallest node id.

    Squared distances are compared in exact rational arithmetic against the
    unrounded centroid, so ties are genuine ties.
    """
    points = _member_positions(grid, positions)
    cx, cy, cz = _exact_mean(points)

    def key(item: tuple[str, Position]) -> tuple[Fraction, str]:
        node_id, p = item
        d2 = (Fraction(p.x) - cx) ** 2 + (Fraction(p.y) - cy) ** 2 + (Fraction(p.z) - cz) ** 2
        return d2, node_id

    return min(zip(grid.members, points), key=key)[0]


def elect_all(
    grids: Sequence[Grid], positions: Mapping[str, Position]
) -> tuple[list[Grid], list[Centroid]]:
    elected = [g.with_coordinator(elect_coordinator(g, positions)) for g in grids]
    return elected, [centroid(g, positions) for g in grids]
