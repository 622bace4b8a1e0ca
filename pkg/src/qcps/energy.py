"""First-order radio energy accounting and QCPS-vs-baseline comparison.

A sensor transmitting ``k`` bits over ``d`` meters spends
``(e_elec + e_amp * d**2) * k`` joules; receiving costs ``e_elec * k``.
The cloud and its gateway are mains powered and never charged.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Protocol

from .errors import ScenarioMismatch
from .model import CLOUD, Position

__all__ = [
    "CostComparison",
    "EnergyLedger",
    "NodeEnergy",
    "RadioParams",
    "charge_message",
    "compare_costs",
]

CSV_COLUMNS = ("node_id", "model", "tx_j", "rx_j", "compute_j", "msgs_sent", "msgs_received")


@dataclass(frozen=True)
class RadioParams:
    """Radio and framing constants, stored in the scenario file's units."""

    e_elec_nj: float = 50.0
    e_amp_pj: float = 100.0
    compute_nj: float = 50.0
    header_bits: int = 200
    reading_bits: int = 800
    gateway: Position = Position(60.0, 55.0, 100.0)

    def __post_init__(self) -> None:
        for name in ("e_elec_nj", "e_amp_pj", "compute_nj"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"{name} must be a number, got {value!r}")
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("header_bits", "reading_bits"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
        if self.header_bits < 1:
            raise ValueError("header_bits must be at least 1")

    @property
    def e_elec(self) -> float:
        """Joules per bit."""
        return self.e_elec_nj * 1e-9

    @property
    def e_amp(self) -> float:
        """Joules per bit per square meter."""
        return self.e_amp_pj * 1e-12

    @property
    def compute_cost(self) -> float:
        """Joules per aggregation performed on a sensor."""
        return self.compute_nj * 1e-9

    def tx_energy(self, bits: int, distance: float) -> float:
        return (self.e_elec + self.e_amp * distance * distance) * bits

    def rx_energy(self, bits: int) -> float:
        return self.e_elec * bits


class _Charged(Protocol):
    src: str
    dst: str
    bits: int


@dataclass
class NodeEnergy:
    tx_energy: float = 0.0
    rx_energy: float = 0.0
    compute_energy: float = 0.0
    msgs_sent: int = 0
    msgs_received: int = 0

    @property
    def radio_energy(self) -> float:
        return self.tx_energy + self.rx_energy

    @property
    def total(self) -> float:
        return self.tx_energy + self.rx_energy + self.compute_energy


@dataclass
class EnergyLedger:
    radio: RadioParams
    nodes: dict[str, NodeEnergy] = field(default_factory=dict)
    cloud_ops: int = 0

    @classmethod
    def for_nodes(cls, node_ids: Iterable[str], radio: RadioParams) -> EnergyLedger:
        return cls(radio, {node_id: NodeEnergy() for node_id in node_ids})

    def charge_compute(self, node_id: str, operations: int = 1) -> None:
        self.nodes[node_id].compute_energy += self.radio.compute_cost * operations

    def charge_cloud_op(self, operations: int = 1) -> None:
        self.cloud_ops += operations

    def total_radio(self) -> float:
        return sum(n.radio_energy for n in self.nodes.values())

    def total_compute(self) -> float:
        return sum(n.compute_energy for n in self.nodes.values())

    def total(self) -> float:
        return sum(n.total for n in self.nodes.values())


def charge_message(ledger: EnergyLedger, msg: _Charged, distance: float) -> EnergyLedger:
    """Charge ``msg`` to the sensors at either end and return ``ledger``."""
    if distance < 0:
        raise ValueError(f"negative distance {distance!r}")
    if msg.src != CLOUD:
        sender = ledger.nodes[msg.src]
        sender.tx_energy += ledger.radio.tx_energy(msg.bits, distance)
        sender.msgs_sent += 1
    if msg.dst != CLOUD:
        receiver = ledger.nodes[msg.dst]
        receiver.rx_energy += ledger.radio.rx_energy(msg.bits)
        receiver.msgs_received += 1
    return ledger


def _ratio(num: float, den: float) -> float | None:
    return num / den if den > 0 else None


@dataclass(frozen=True)
class NodeComparison:
    node_id: str
    qcps: NodeEnergy
    baseline: NodeEnergy

    @property
    def radio_ratio(self) -> float | None:
        return _ratio(self.qcps.radio_energy, self.baseline.radio_energy)


@dataclass(frozen=True)
class CostComparison:
    rows: tuple[NodeComparison, ...]
    qcps_cloud_ops: int
    baseline_cloud_ops: int

    @property
    def qcps_radio(self) -> float:
        return sum(r.qcps.radio_energy for r in self.rows)

    @property
    def baseline_radio(self) -> float:
        return sum(r.baseline.radio_energy for r in self.rows)

    @property
    def qcps_compute(self) -> float:
        return sum(r.qcps.compute_energy for r in self.rows)

    @property
    def baseline_compute(self) -> float:
        return sum(r.baseline.compute_energy for r in self.rows)

    @property
    def qcps_total(self) -> float:
        return self.qcps_radio + self.qcps_compute

    @property
    def baseline_total(self) -> float:
        return self.baseline_radio + self.baseline_compute

    @property
    def radio_ratio(self) -> float | None:
        return _ratio(self.qcps_radio, self.baseline_radio)

    @property
    def compute_ratio(self) -> float | None:
        return _ratio(self.qcps_compute, self.baseline_compute)

    @property
    def total_ratio(self) -> float | None:
        return _ratio(self.qcps_total, self.baseline_total)

    @property
    def qcps_cheaper(self) -> bool:
        return self.qcps_total < self.baseline_total

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            for model, e in (("qcps", row.qcps), ("baseline", row.baseline)):
                writer.writerow([
                    row.node_id, model, repr(e.tx_energy), repr(e.rx_energy),
                    repr(e.compute_energy), e.msgs_sent, e.msgs_received,
                ])
        return buf.getvalue()

    def to_text(self) -> str:
        def fmt(x: float | None) -> str:
            return "-" if x is None else f"{x:.4e}"

        def fmt_ratio(x: float | None) -> str:
            return "-" if x is None else f"{x:.3f}"

        header = (
            f"{'node':<10} {'qcps_radio_j':>12} {'base_radio_j':>12} {'ratio':>7} "
            f"{'qcps_comp_j':>12} {'base_comp_j':>12} {'qcps_msgs':>9} {'base_msgs':>9}"
        )
        lines = [header, "-" * len(header)]
        for r in self.rows:
            q, b = r.qcps, r.baseline
            lines.append(
                f"{r.node_id:<10} {fmt(q.radio_energy):>12} {fmt(b.radio_energy):>12} "
                f"{fmt_ratio(r.radio_ratio):>7} {fmt(q.compute_energy):>12} {fmt(b.compute_energy):>12} "
                f"{q.msgs_sent + q.msgs_received:>9} {b.msgs_sent + b.msgs_received:>9}"
            )
        lines.append("-" * len(header))
        q_msgs = sum(r.qcps.msgs_sent for r in self.rows)
        b_msgs = sum(r.baseline.msgs_sent for r in self.rows)
        lines.append(
            f"{'TOTAL':<10} {fmt(self.qcps_radio):>12} {fmt(self.baseline_radio):>12} "
            f"{fmt_ratio(self.radio_ratio):>7} {fmt(self.qcps_compute):>12} {fmt(self.baseline_compute):>12} "
            f"{'':>9} {'':>9}"
        )
        lines.append(f"sensor messages sent: qcps={q_msgs} baseline={b_msgs}")
        lines.append(f"cloud ops: qcps={self.qcps_cloud_ops} baseline={self.baseline_cloud_ops}")
        lines.append(
            f"total sensor energy: qcps={fmt(self.qcps_total)} baseline={fmt(self.baseline_total)} "
            f"ratio={fmt_ratio(self.total_ratio)}"
        )
        lines.append(f"QCPS cheaper: {'yes' if self.qcps_cheaper else 'no'}")
        return "\n".join(lines) + "\n"


def compare_costs(qcps_ledger: EnergyLedger, baseline_ledger: EnergyLedger) -> CostComparison:
    if set(qcps_ledger.nodes) != set(baseline_ledger.nodes):
        raise ScenarioMismatch("ledgers cover different node sets")
    rows = tuple(
        NodeComparison(node_id, qcps_ledger.nodes[node_id], baseline_ledger.nodes[node_id])
        for node_id in qcps_ledger.nodes
    )
    return CostComparison(rows, qcps_ledger.cloud_ops, baseline_ledger.cloud_ops)
