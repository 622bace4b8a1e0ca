"""Deterministic scenario runner for the QCPS model and the direct baseline.

A run partitions the nodes, elects coordinators, registers every node with
the cloud and then executes the workload in ``(at, list position)`` order.
Time is virtual: each workload item is one atomic event.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Any, Sequence, Union

from .cloud import AggregateKind, Cloud, RegistrationRecord, aggregate
from .election import Centroid, elect_all
from .energy import CostComparison, EnergyLedger, RadioParams, compare_costs
from .errors import InvariantViolation, QcpsError, UnknownGrid, UnknownNode, UnknownType
from .model import CLOUD, Reading, SensorNode, euclidean_distance
from .partition import Grid, compute_grids, label_nodes, validate_threshold
from .protocol import Channel, CrossGridQuery, Message, QcpsProtocol, format_trace

__all__ = [
    "MODELS",
    "Answer",
    "CrossQuery",
    "RunResult",
    "Scenario",
    "Sense",
    "Sync",
    "UserAggregate",
    "run",
    "run_pair",
    "with_random_queries",
]

MODELS = ("qcps", "baseline")


@dataclass(frozen=True)
class Sense:
    at: float
    node: str
    value: float
    unit: str = ""


@dataclass(frozen=True)
class Sync:
    """Flush one grid's coordinator buffer to the cloud; ``grid=None`` flushes all grids."""

    at: float
    grid: str | None = None


@dataclass(frozen=True)
class CrossQuery:
    at: float
    requester: str
    target: str


@dataclass(frozen=True)
class UserAggregate:
    at: float
    sensor_type: str
    kind: AggregateKind


WorkloadItem = Union[Sense, Sync, CrossQuery, UserAggregate]


@dataclass(frozen=True)
class Scenario:
    nodes: tuple[SensorNode, ...]
    threshold: float
    radio: RadioParams = field(default_factory=RadioParams)
    workload: tuple[WorkloadItem, ...] = ()
    seed: int = 0
    model: str = "qcps"

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "workload", tuple(self.workload))
        validate_threshold(self.threshold)
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        for item in self.workload:
            if not item.at >= 0:
                raise ValueError(f"workload time must be non-negative, got {item.at!r}")

    def ordered_workload(self) -> list[tuple[int, WorkloadItem]]:
        return sorted(enumerate(self.workload), key=lambda pair: (pair[1].at, pair[0]))


@dataclass(frozen=True)
class Answer:
    """Result delivered for a query item; ``value`` is a Reading, an aggregate or None."""

    index: int
    at: float
    description: str
    value: Any


@dataclass
class RunResult:
    model: str
    nodes: list[SensorNode]
    grids: list[Grid]
    centroids: list[Centroid]
    ledger: EnergyLedger
    trace: list[Message]
    answers: list[Answer]
    cloud: Cloud

    @property
    def coordinators(self) -> dict[str, str]:
        return {g.grid_id: g.coordinator for g in self.grids}

    def trace_text(self) -> str:
        return format_trace(self.trace)

    def to_dict(self) -> dict[str, Any]:
        def value(v: Any) -> Any:
            if isinstance(v, Reading):
                return {"node_id": v.node_id, "sim_time": v.sim_time, "value": v.value, "unit": v.unit}
            return v

        return {
            "model": self.model,
            "grids": [
                {"grid_id": g.grid_id, "type": g.sensor_type, "members": list(g.members), "coordinator": g.coordinator}
                for g in self.grids
            ],
            "centroids": {c.grid_id: list(c.point.as_tuple()) for c in self.centroids},
            "ledger": {
                node_id: [e.tx_energy, e.rx_energy, e.compute_energy, e.msgs_sent, e.msgs_received]
                for node_id, e in self.ledger.nodes.items()
            },
            "cloud_ops": self.ledger.cloud_ops,
            "trace": self.trace_text(),
            "answers": [[a.index, a.at, a.description, value(a.value)] for a in self.answers],
        }


class _DirectNetwork:
    """Baseline without QCPS: nodes talk to each other over direct distances.

    Readings stay on the sensing node. Aggregates are computed on a sink, the
    node nearest the gateway, which every contributing node transmits to.
    """

    def __init__(self, nodes: Sequence[SensorNode], channel: Channel) -> None:
        self.nodes = list(nodes)
        self.channel = channel
        self.history: dict[str, list[Reading]] = {n.node_id: [] for n in nodes}
        gateway = channel.radio.gateway
        self.sink = min(
            self.nodes, key=lambda n: (euclidean_distance(n.position, gateway), n.node_id)
        ).node_id if self.nodes else None

    def sense(self, reading: Reading) -> None:
        self.history[reading.node_id].append(reading)

    def latest(self, node_id: str) -> Reading | None:
        readings = self.history[node_id]
        return readings[-1] if readings else None

    def query(self, q: CrossGridQuery) -> Reading | None:
        reading = self.latest(q.target)
        if q.requester == q.target:
            return reading
        header = self.channel.radio.header_bits
        self.channel.send(q.issued_at, "query_request", q.requester, q.target, header, (q,))
        reply = (reading,) if reading is not None else ()
        self.channel.send(q.issued_at, "query_reply", q.target, q.requester, self.channel.data_bits(len(reply)), reply)
        return reading

    def user_aggregate(self, at: float, sensor_type: str, kind: AggregateKind):
        relevant = [n for n in self.nodes if n.sensor_type == sensor_type]
        if not relevant:
            raise UnknownType(f"no sensors of type {sensor_type!r}")
        rows: list[Reading] = []
        latest: dict[str, Reading] = {}
        for node in relevant:
            readings = self.history[node.node_id]
            if not readings:
                continue
            sent = readings[-1:] if kind is AggregateKind.LATEST else readings
            if node.node_id != self.sink:
                self.channel.send(at, "report", node.node_id, self.sink, self.channel.data_bits(len(sent)), tuple(sent))
            rows.extend(sent)
            latest[node.node_id] = readings[-1]
        rows.sort(key=lambda r: r.sim_time)
        self.channel.ledger.charge_compute(self.sink)
        return aggregate(rows, latest, kind)


def _prepare(scenario: Scenario) -> tuple[list[SensorNode], list[Grid], list[Centroid], Cloud]:
    grids = compute_grids(scenario.nodes, scenario.threshold)
    positions = {n.node_id: n.position for n in scenario.nodes}
    grids, centroids = elect_all(grids, positions)
    nodes = label_nodes(scenario.nodes, grids)
    cloud = Cloud()
    for node in nodes:
        cloud.register(RegistrationRecord.from_node(node))
    return nodes, grids, centroids, cloud


def run(scenario: Scenario, model: str | None = None) -> RunResult:
    """Execute ``scenario`` under ``model`` (defaults to ``scenario.model``)."""
    model = model or scenario.model
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    nodes, grids, centroids, cloud = _prepare(scenario)
    by_id = {n.node_id: n for n in nodes}
    grid_ids = [g.grid_id for g in grids]
    ledger = EnergyLedger.for_nodes(by_id, scenario.radio)
    channel = Channel({n.node_id: n.position for n in nodes}, ledger)
    qcps = QcpsProtocol(nodes, grids, cloud, channel)
    direct = _DirectNetwork(nodes, channel)
    answers: list[Answer] = []

    def node(node_id: str) -> SensorNode:
        if node_id not in by_id:
            raise UnknownNode(f"unknown node {node_id!r}")
        return by_id[node_id]

    for index, item in scenario.ordered_workload():
        try:
            if isinstance(item, Sense):
                reading = Reading(node(item.node).node_id, float(item.at), item.value, item.unit)
                if model == "qcps":
                    qcps.report_readings(by_id[item.node], reading)
                else:
                    direct.sense(reading)
            elif isinstance(item, Sync):
                if item.grid is not None and item.grid not in grid_ids:
                    raise UnknownGrid(f"unknown grid {item.grid!r}")
                if model == "qcps":
                    for grid in grids:
                        if item.grid is None or grid.grid_id == item.grid:
                            qcps.sync_to_cloud(by_id[grid.coordinator], float(item.at))
            elif isinstance(item, CrossQuery):
                q = CrossGridQuery(node(item.requester).node_id, node(item.target).node_id, float(item.at))
                if model == "qcps":
                    found = qcps.resolve_query(q).reading
                else:
                    found = direct.query(q)
                answers.append(Answer(index, float(item.at), f"{q.requester}<-{q.target}", found))
            elif isinstance(item, UserAggregate):
                kind = AggregateKind(item.kind)
                if model == "qcps":
                    result = cloud.user_query(item.sensor_type, kind)
                    ledger.charge_cloud_op()
                else:
                    result = direct.user_aggregate(float(item.at), item.sensor_type, kind)
                answers.append(Answer(index, float(item.at), f"{kind.value}({item.sensor_type})", result))
            else:
                raise TypeError(f"unsupported workload item {item!r}")
        except QcpsError as exc:
            exc.workload_index = index
            raise

    result = RunResult(model, nodes, grids, centroids, ledger, channel.messages, answers, cloud)
    check_run(result)
    return result


def check_run(result: RunResult) -> None:
    """Raise :class:`InvariantViolation` if a finished run breaks a model guarantee."""
    times = [m.time for m in result.trace]
    if any(b < a for a, b in zip(times, times[1:])):
        raise InvariantViolation("trace timestamps decrease")
    by_id = {n.node_id: n for n in result.nodes}
    for grid in result.grids:
        flagged = [m for m in grid.members if by_id[m].coordinator]
        if flagged != [grid.coordinator]:
            raise InvariantViolation(f"grid {grid.grid_id} coordinator flags {flagged} != {grid.coordinator}")
    for node in result.nodes:
        if result.cloud.registry[node.node_id] != RegistrationRecord.from_node(node):
            raise InvariantViolation(f"registration of {node.node_id} does not match its attributes")
    for sensor_type, db in result.cloud.databases.items():
        for row in db.rows:
            if result.cloud.registry[row.node_id].sensor_type != sensor_type:
                raise InvariantViolation(f"{row.node_id} reading stored in {sensor_type} database")
    if result.model == "qcps":
        for msg in result.trace:
            if msg.src != CLOUD and msg.dst != CLOUD:
                src, dst = by_id[msg.src], by_id[msg.dst]
                if src.grid_id != dst.grid_id:
                    raise InvariantViolation(f"message {msg.seq} crosses grids without the cloud")
                if not src.coordinator and not dst.coordinator:
                    raise InvariantViolation(f"message {msg.seq} bypasses the coordinator")
            if msg.dst == CLOUD and not result.cloud.verify(msg.src):
                raise InvariantViolation(f"message {msg.seq}: {msg.src} reached the cloud unverified")


@dataclass(frozen=True)
class PairResult:
    qcps: RunResult
    baseline: RunResult
    comparison: CostComparison


def run_pair(scenario: Scenario) -> PairResult:
    qcps = run(scenario, "qcps")
    baseline = run(scenario, "baseline")
    return PairResult(qcps, baseline, compare_costs(qcps.ledger, baseline.ledger))


def with_random_queries(scenario: Scenario, count: int) -> Scenario:
    """Append ``count`` cross-grid queries drawn with ``scenario.seed``.

    Queries start one second after the last existing workload item, one per
    second. A target is drawn from outside the requester's grid when possible.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0 or not scenario.nodes:
        return scenario
    nodes = label_nodes(scenario.nodes, compute_grids(scenario.nodes, scenario.threshold))
    rng = random.Random(scenario.seed)
    start = max((item.at for item in scenario.workload), default=0.0) + 1.0
    extra = []
    for i in range(count):
        requester = rng.choice(nodes)
        foreign = [n for n in nodes if n.grid_id != requester.grid_id]
        target = rng.choice(foreign) if foreign else requester
        extra.append(CrossQuery(start + i, requester.node_id, target.node_id))
    return replace(scenario, workload=scenario.workload + tuple(extra))
