"""In-simulation cloud: per-type databases behind a recognize engine.

Sensors reach the cloud only through their grid coordinator, and the engine
admits an accessor only when its registered attributes mark it as a
coordinator. Users query aggregates directly with :meth:`Cloud.user_query`.
"""

from __future__ import annotations

import bisect
import csv
import enum
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import AccessDenied, ConflictingRegistration, UnknownOrigin, UnknownType
from .model import Reading, SensorNode

__all__ = [
    "AggregateKind",
    "Cloud",
    "RegistrationRecord",
    "TypeDatabase",
    "aggregate",
]

DUMP_COLUMNS = ("node_id", "sim_time", "value", "unit")


class AggregateKind(str, enum.Enum):
    LATEST = "latest"
    COUNT = "count"
    MIN = "min"
    MAX = "max"
    MEAN = "mean"


@dataclass(frozen=True)
class RegistrationRecord:
    node_id: str
    sensor_type: str
    grid_id: str
    coordinator: bool

    @classmethod
    def from_node(cls, node: SensorNode) -> RegistrationRecord:
        if node.grid_id is None:
            raise ValueError(f"node {node.node_id} has no grid; partition before registering")
        return cls(node.node_id, node.sensor_type, node.grid_id, node.coordinator)


@dataclass
class TypeDatabase:
    """Rows for one sensor type, kept sorted by (sim_time, arrival sequence).

    Rows are only ever inserted, never modified or removed.
    """

    sensor_type: str
    rows: list[Reading] = field(default_factory=list)
    _keys: list[tuple[float, int]] = field(default_factory=list, repr=False)
    _latest: dict[str, tuple[tuple[float, int], Reading]] = field(default_factory=dict, repr=False)

    def insert(self, reading: Reading, seq: int) -> None:
        key = (reading.sim_time, seq)
        pos = bisect.bisect_right(self._keys, key)
        self._keys.insert(pos, key)
        self.rows.insert(pos, reading)
        current = self._latest.get(reading.node_id)
        if current is None or key > current[0]:
            self._latest[reading.node_id] = (key, reading)

    def latest(self, node_id: str) -> Reading | None:
        entry = self._latest.get(node_id)
        return entry[1] if entry else None

    def latest_per_node(self) -> dict[str, Reading]:
        return {node_id: entry[1] for node_id, entry in sorted(self._latest.items())}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(DUMP_COLUMNS)
        for r in self.rows:
            writer.writerow([r.node_id, repr(r.sim_time), repr(r.value), r.unit])
        return buf.getvalue()


def aggregate(
    rows: Sequence[Reading], latest: Mapping[str, Reading], kind: AggregateKind
) -> dict[str, float] | int | float | None:
    """Evaluate ``kind`` over ``rows``.

    ``latest`` maps node id to that node's newest reading and is only used for
    :attr:`AggregateKind.LATEST`. ``min``/``max``/``mean`` over no rows give
    ``None``.
    """
    kind = AggregateKind(kind)
    if kind is AggregateKind.LATEST:
        return {node_id: r.value for node_id, r in sorted(latest.items())}
    if kind is AggregateKind.COUNT:
        return len(rows)
    if not rows:
        return None
    values = [r.value for r in rows]
    if kind is AggregateKind.MIN:
        return min(values)
    if kind is AggregateKind.MAX:
        return max(values)
    return sum(values) / len(values)


class Cloud:
    def __init__(self) -> None:
        self.registry: dict[str, RegistrationRecord] = {}
        self.databases: dict[str, TypeDatabase] = {}
        self._arrivals = 0

    # -- recognize engine -------------------------------------------------

    def register(self, record: RegistrationRecord) -> bool:
        existing = self.registry.get(record.node_id)
        if existing is not None:
            if existing != record:
                raise ConflictingRegistration(
                    f"node {record.node_id} already registered as {existing}"
                )
            return True
        self.registry[record.node_id] = record
        self.databases.setdefault(record.sensor_type, TypeDatabase(record.sensor_type))
        return True

    def verify(self, accessor: str) -> bool:
        record = self.registry.get(accessor)
        return record is not None and record.coordinator

    def _require_access(self, accessor: str) -> None:
        if not self.verify(accessor):
            raise AccessDenied(f"{accessor} is not a registered coordinator")

    def _origin(self, node_id: str) -> RegistrationRecord:
        record = self.registry.get(node_id)
        if record is None:
            raise UnknownOrigin(f"node {node_id} is not registered")
        return record

    def is_registered(self, node_id: str) -> bool:
        return node_id in self.registry

    # -- coordinator operations -------------------------------------------

    def classify_and_store(self, accessor: str, batch: Iterable[Reading]) -> int:
        self._require_access(accessor)
        batch = list(batch)
        # Resolve every origin first so a bad batch stores nothing.
        targets = [self.databases[self._origin(r.node_id).sensor_type] for r in batch]
        for db, reading in zip(targets, batch):
            self._arrivals += 1
            db.insert(reading, self._arrivals)
        return len(batch)

    def fetch_latest(self, accessor: str, target: str) -> Reading | None:
        self._require_access(accessor)
        record = self._origin(target)
        return self.databases[record.sensor_type].latest(target)

    # -- users --------------------------------------------------------------

    def user_query(self, sensor_type: str, kind: AggregateKind | str):
        db = self.databases.get(sensor_type)
        if db is None:
            raise UnknownType(f"no database for sensor type {sensor_type!r}")
        return aggregate(db.rows, db.latest_per_node(), AggregateKind(kind))

    # -- export -------------------------------------------------------------

    def dump(self, directory: str | Path) -> list[Path]:
        """Write one ``<type>.csv`` per database into ``directory``."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for sensor_type in sorted(self.databases):
            path = out / f"{sensor_type}.csv"
            path.write_text(self.databases[sensor_type].to_csv(), encoding="utf-8")
            written.append(path)
        return written
