"""Reading and writing scenario files.

A scenario file is a UTF-8 JSON document::

    {
      "nodes": [{"id": "A", "type": "environment", "x": 30, "y": 40, "z": 10}, ...],
      "threshold": 110,
      "radio": {"e_elec_nj": 50, "e_amp_pj": 100, "compute_nj": 50,
                "header_bits": 200, "reading_bits": 800,
                "gateway": {"x": 60, "y": 55, "z": 100}},
      "workload": [
        {"at": 0, "action": "sense", "node": "A", "value": 21.5, "unit": "C"},
        {"at": 1, "action": "sync", "grid": "g1"},
        {"at": 2, "action": "cross_query", "requester": "A", "target": "B"},
        {"at": 3, "action": "user_aggregate", "type": "environment", "kind": "mean"}
      ],
      "seed": 0,
      "model": "qcps"
    }

``nodes`` and ``threshold`` are required; everything else has defaults.
Unknown keys are rejected at every level. Node order is significant.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .cloud import AggregateKind
from .energy import RadioParams
from .errors import ScenarioFormatError
from .model import Position, SensorNode
from .sim import CrossQuery, Scenario, Sense, Sync, UserAggregate

__all__ = ["dump_scenario", "load_scenario", "parse_scenario", "scenario_to_dict"]

_TOP_KEYS = {"nodes", "threshold", "radio", "workload", "seed", "model"}
_RADIO_KEYS = {"e_elec_nj", "e_amp_pj", "compute_nj", "header_bits", "reading_bits", "gateway"}
_ACTION_KEYS = {
    "sense": ({"node", "value"}, {"unit"}),
    "sync": (set(), {"grid"}),
    "cross_query": ({"requester", "target"}, set()),
    "user_aggregate": ({"type", "kind"}, set()),
}


def _fail(where: str, msg: str) -> ScenarioFormatError:
    return ScenarioFormatError(f"{where}: {msg}")


def _check_keys(obj: Any, where: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise _fail(where, f"expected an object, got {type(obj).__name__}")
    unknown = set(obj) - required - set(optional)
    if unknown:
        raise _fail(where, f"unknown key(s) {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        raise _fail(where, f"missing key(s) {', '.join(sorted(missing))}")
    return obj


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise _fail(where, f"expected a finite number, got {value!r}")
    return float(value)


def _string(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise _fail(where, f"expected a string, got {value!r}")
    return value


def _position(obj: Any, where: str) -> Position:
    obj = _check_keys(obj, where, {"x", "y", "z"})
    return Position(*(_number(obj[k], f"{where}.{k}") for k in ("x", "y", "z")))


def _node(obj: Any, index: int) -> SensorNode:
    where = f"nodes[{index}]"
    if isinstance(obj, dict) and isinstance(obj.get("id"), str):
        where = f"node {obj['id']!r}"
    obj = _check_keys(obj, where, {"id", "type", "x", "y", "z"})
    coords = [_number(obj[k], f"{where} coordinate {k}") for k in ("x", "y", "z")]
    try:
        return SensorNode(_string(obj["id"], f"{where}.id"), _string(obj["type"], f"{where}.type"), Position(*coords))
    except ValueError as exc:
        raise _fail(where, str(exc)) from None


def _radio(obj: Any) -> RadioParams:
    obj = _check_keys(obj, "radio", set(), _RADIO_KEYS)
    kwargs: dict[str, Any] = {}
    for key in ("e_elec_nj", "e_amp_pj", "compute_nj"):
        if key in obj:
            kwargs[key] = _number(obj[key], f"radio.{key}")
    for key in ("header_bits", "reading_bits"):
        if key in obj:
            if isinstance(obj[key], bool) or not isinstance(obj[key], int):
                raise _fail(f"radio.{key}", f"expected an integer, got {obj[key]!r}")
            kwargs[key] = obj[key]
    if "gateway" in obj:
        kwargs["gateway"] = _position(obj["gateway"], "radio.gateway")
    try:
        return RadioParams(**kwargs)
    except ValueError as exc:
        raise _fail("radio", str(exc)) from None


def _workload_item(obj: Any, index: int):
    where = f"workload[{index}]"
    if not isinstance(obj, dict):
        raise _fail(where, "expected an object")
    action = obj.get("action")
    if action not in _ACTION_KEYS:
        raise _fail(where, f"unknown action {action!r}")
    required, optional = _ACTION_KEYS[action]
    _check_keys(obj, where, required | {"at", "action"}, optional)
    at = _number(obj["at"], f"{where}.at")
    if at < 0:
        raise _fail(where, "time must be non-negative")
    if action == "sense":
        return Sense(at, _string(obj["node"], f"{where}.node"), _number(obj["value"], f"{where}.value"),
                     _string(obj.get("unit", ""), f"{where}.unit"))
    if action == "sync":
        grid = obj.get("grid")
        return Sync(at, None if grid is None else _string(grid, f"{where}.grid"))
    if action == "cross_query":
        return CrossQuery(at, _string(obj["requester"], f"{where}.requester"), _string(obj["target"], f"{where}.target"))
    try:
        kind = AggregateKind(obj["kind"])
    except ValueError:
        raise _fail(where, f"unknown aggregate kind {obj['kind']!r}") from None
    return UserAggregate(at, _string(obj["type"], f"{where}.type"), kind)


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    doc = _check_keys(doc, "scenario", {"nodes", "threshold"}, _TOP_KEYS)
    if not isinstance(doc["nodes"], list):
        raise _fail("nodes", "expected an array")
    nodes = [_node(obj, i) for i, obj in enumerate(doc["nodes"])]
    threshold = _number(doc["threshold"], "threshold")
    radio = _radio(doc.get("radio", {}))
    workload = doc.get("workload", [])
    if not isinstance(workload, list):
        raise _fail("workload", "expected an array")
    items = [_workload_item(obj, i) for i, obj in enumerate(workload)]
    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise _fail("seed", f"expected a non-negative integer, got {seed!r}")
    try:
        return Scenario(tuple(nodes), threshold, radio, tuple(items), seed, doc.get("model", "qcps"))
    except ValueError as exc:
        raise ScenarioFormatError(str(exc)) from None


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioFormatError(f"cannot read {path}: {exc}") from None
    return parse_scenario(text)


def _item_to_dict(item) -> dict[str, Any]:
    if isinstance(item, Sense):
        return {"at": item.at, "action": "sense", "node": item.node, "value": item.value, "unit": item.unit}
    if isinstance(item, Sync):
        out: dict[str, Any] = {"at": item.at, "action": "sync"}
        if item.grid is not None:
            out["grid"] = item.grid
        return out
    if isinstance(item, CrossQuery):
        return {"at": item.at, "action": "cross_query", "requester": item.requester, "target": item.target}
    return {"at": item.at, "action": "user_aggregate", "type": item.sensor_type, "kind": AggregateKind(item.kind).value}


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    r = scenario.radio
    return {
        "nodes": [
            {"id": n.node_id, "type": n.sensor_type, "x": n.position.x, "y": n.position.y, "z": n.position.z}
            for n in scenario.nodes
        ],
        "threshold": scenario.threshold,
        "radio": {
            "e_elec_nj": r.e_elec_nj,
            "e_amp_pj": r.e_amp_pj,
            "compute_nj": r.compute_nj,
            "header_bits": r.header_bits,
            "reading_bits": r.reading_bits,
            "gateway": {"x": r.gateway.x, "y": r.gateway.y, "z": r.gateway.z},
        },
        "workload": [_item_to_dict(item) for item in scenario.workload],
        "seed": scenario.seed,
        "model": scenario.model,
    }


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"
