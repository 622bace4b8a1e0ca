"""Coordinator-mediated reporting, cloud sync and cross-grid queries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .cloud import Cloud
from .energy import EnergyLedger, charge_message
from .errors import InvariantViolation, NoCoordinator, NotCoordinator, UnknownOrigin
from .model import CLOUD, Position, Reading, SensorNode, euclidean_distance
from .partition import Grid

__all__ = [
    "MESSAGE_KINDS",
    "Channel",
    "CrossGridQuery",
    "Message",
    "QcpsProtocol",
    "QueryResolution",
    "format_trace",
    "parse_trace",
]

MESSAGE_KINDS = ("report", "sync", "query_request", "cloud_fetch", "cloud_reply", "query_reply")


@dataclass(frozen=True)
class Message:
    seq: int
    time: float
    kind: str
    src: str
    dst: str
    bits: int
    payload: tuple[Any, ...] = ()

    def trace_line(self) -> str:
        return f"{self.seq} {self.time:.6f} {self.kind} {self.src} {self.dst} {self.bits}"


def format_trace(messages: Iterable[Message]) -> str:
    return "".join(m.trace_line() + "\n" for m in messages)


def parse_trace(text: str) -> list[tuple[int, float, str, str, str, int]]:
    """Parse exported trace lines back into ``(seq, time, kind, src, dst, bits)``."""
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        seq, time, kind, src, dst, bits = line.split()
        rows.append((int(seq), float(time), kind, src, dst, int(bits)))
    return rows


@dataclass
class Channel:
    """Radio medium shared by one run: numbers, records and charges messages."""

    positions: Mapping[str, Position]
    ledger: EnergyLedger
    messages: list[Message] = field(default_factory=list)

    @property
    def radio(self):
        return self.ledger.radio

    def position_of(self, principal: str) -> Position:
        if principal == CLOUD:
            return self.radio.gateway
        return self.positions[principal]

    def send(self, time: float, kind: str, src: str, dst: str, bits: int, payload: tuple = ()) -> Message:
        if kind not in MESSAGE_KINDS:
            raise InvariantViolation(f"unknown message kind {kind!r}")
        if src == dst:
            raise InvariantViolation(f"{kind} message addressed to its own sender {src}")
        if bits < self.radio.header_bits:
            raise InvariantViolation(f"{kind} message of {bits} bits is shorter than the header")
        msg = Message(len(self.messages) + 1, time, kind, src, dst, bits, payload)
        self.messages.append(msg)
        charge_message(self.ledger, msg, euclidean_distance(self.position_of(src), self.position_of(dst)))
        return msg

    def data_bits(self, readings: int) -> int:
        return self.radio.header_bits + self.radio.reading_bits * readings


@dataclass(frozen=True)
class CrossGridQuery:
    requester: str
    target: str
    issued_at: float


@dataclass(frozen=True)
class QueryResolution:
    query: CrossGridQuery
    messages: tuple[Message, ...]
    reading: Reading | None

    @property
    def found(self) -> bool:
        return self.reading is not None


class QcpsProtocol:
    """Message flow of the QCPS model over an elected set of grids.

    Members report to their coordinator, coordinators batch readings to the
    cloud, and every query travels requester -> coordinator -> cloud and back.
    """

    def __init__(
        self,
        nodes: Sequence[SensorNode],
        grids: Sequence[Grid],
        cloud: Cloud,
        channel: Channel,
    ) -> None:
        self.nodes = {n.node_id: n for n in nodes}
        self.grids = {g.grid_id: g for g in grids}
        self.cloud = cloud
        self.channel = channel
        self.buffers: dict[str, list[Reading]] = {g.coordinator: [] for g in grids if g.coordinator}

    def coordinator_of(self, node: SensorNode) -> str:
        grid = self.grids.get(node.grid_id) if node.grid_id else None
        if grid is None or grid.coordinator is None:
            raise NoCoordinator(f"node {node.node_id} has no elected coordinator")
        return grid.coordinator

    def report_readings(self, member: SensorNode, reading: Reading) -> Message | None:
        coordinator = self.coordinator_of(member)
        if coordinator == member.node_id:
            self.buffers[coordinator].append(reading)
            return None
        msg = self.channel.send(
            reading.sim_time, "report", member.node_id, coordinator,
            self.channel.data_bits(1), (reading,),
        )
        self.buffers[coordinator].append(reading)
        return msg

    def sync_to_cloud(self, coordinator: SensorNode, time: float) -> Message | None:
        if not coordinator.coordinator:
            raise NotCoordinator(f"node {coordinator.node_id} is not a coordinator")
        batch = self.buffers.get(coordinator.node_id, [])
        if not batch:
            return None
        msg = self.channel.send(
            time, "sync", coordinator.node_id, CLOUD,
            self.channel.data_bits(len(batch)), tuple(batch),
        )
        self.cloud.classify_and_store(coordinator.node_id, batch)
        self.channel.ledger.charge_cloud_op()
        self.buffers[coordinator.node_id] = []
        return msg

    def resolve_query(self, q: CrossGridQuery) -> QueryResolution:
        requester = self.nodes[q.requester]
        coordinator = self.coordinator_of(requester)
        if not self.cloud.is_registered(q.target):
            raise UnknownOrigin(f"query target {q.target} is not registered")
        send = self.channel.send
        header = self.channel.radio.header_bits
        trace = []
        if coordinator != q.requester:
            trace.append(send(q.issued_at, "query_request", q.requester, coordinator, header, (q,)))
        trace.append(send(q.issued_at, "cloud_fetch", coordinator, CLOUD, header, (q,)))
        reading = self.cloud.fetch_latest(coordinator, q.target)
        self.channel.ledger.charge_cloud_op()
        reply = (reading,) if reading is not None else ()
        bits = self.channel.data_bits(len(reply))
        trace.append(send(q.issued_at, "cloud_reply", CLOUD, coordinator, bits, reply))
        if coordinator != q.requester:
            trace.append(send(q.issued_at, "query_reply", coordinator, q.requester, bits, reply))
        return QueryResolution(q, tuple(trace), reading)
