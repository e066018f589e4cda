"""JSON documents for candidates and reports.

Candidate layout::

    {"schema_version": "fansub.candidate/1",
     "speeds": [mu0, ..., muN],
     "states": {"left": S, "r1": S, ..., "rN": S, "right": S}}

with ``S = {"rho": .., "m": [m1, m2], "U": {"u11": .., "u12": ..}, "q": .., "F": [F1, F2]}``.
Floats are written with ``repr`` (shortest string that round-trips exactly).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import jsonschema

from .reduction import FanSubsolution
from .states import FanPartition, FanState, TracelessSym2

CANDIDATE_SCHEMA_VERSION = "fansub.candidate/1"
REPORT_SCHEMA_VERSION = "fansub.report/1"
SCAN_SCHEMA_VERSION = "fansub.scan/1"

_number = {"type": "number"}
_pair = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}
_state = {
    "type": "object",
    "required": ["rho", "m", "U", "q", "F"],
    "additionalProperties": False,
    "properties": {
        "rho": _number,
        "m": _pair,
        "U": {
            "type": "object",
            "required": ["u11", "u12"],
            "additionalProperties": False,
            "properties": {"u11": _number, "u12": _number},
        },
        "q": _number,
        "F": _pair,
    },
}
CANDIDATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "speeds", "states"],
    "properties": {
        "schema_version": {"const": CANDIDATE_SCHEMA_VERSION},
        "speeds": {"type": "array", "items": _number, "minItems": 2},
        "states": {
            "type": "object",
            "required": ["left", "right", "r1"],
            "patternProperties": {"^(left|right|r[1-9][0-9]*)$": _state},
            "additionalProperties": False,
        },
    },
}


class SchemaError(ValueError):
    """Document does not match the schema; ``pointer`` is a JSON pointer to the culprit."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def state_to_dict(s: FanState) -> dict:
    return {
        "rho": s.rho,
        "m": [s.m[0], s.m[1]],
        "U": {"u11": s.U.u11, "u12": s.U.u12},
        "q": s.q,
        "F": [s.F[0], s.F[1]],
    }


def state_from_dict(d: dict) -> FanState:
    return FanState(
        rho=float(d["rho"]),
        m=(float(d["m"][0]), float(d["m"][1])),
        U=TracelessSym2(float(d["U"]["u11"]), float(d["U"]["u12"])),
        q=float(d["q"]),
        F=(float(d["F"][0]), float(d["F"][1])),
    )


def candidate_to_dict(sub: FanSubsolution) -> dict:
    states = {"left": state_to_dict(sub.left)}
    for k, s in enumerate(sub.interior, start=1):
        states[f"r{k}"] = state_to_dict(s)
    states["right"] = state_to_dict(sub.right)
    return {
        "schema_version": CANDIDATE_SCHEMA_VERSION,
        "speeds": list(sub.partition.speeds),
        "states": states,
    }


def candidate_from_dict(doc) -> FanSubsolution:
    errors = sorted(jsonschema.Draft202012Validator(CANDIDATE_SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _pointer(err.absolute_path))
    speeds = doc["speeds"]
    n = len(speeds) - 1
    states = doc["states"]
    for k in range(1, n + 1):
        if f"r{k}" not in states:
            raise SchemaError(f"{len(speeds)} speeds need interior state r{k}", f"/states/r{k}")
    extra = sorted(set(states) - {"left", "right"} - {f"r{k}" for k in range(1, n + 1)})
    if extra:
        raise SchemaError(f"{len(speeds)} speeds allow {n} interior states, found extra {extra[0]}", f"/states/{extra[0]}")
    return FanSubsolution(
        partition=FanPartition(tuple(float(v) for v in speeds)),
        left=state_from_dict(states["left"]),
        right=state_from_dict(states["right"]),
        interior=tuple(state_from_dict(states[f"r{k}"]) for k in range(1, n + 1)),
    )


def load_candidate(path: str | Path) -> FanSubsolution:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "") from exc
    return candidate_from_dict(doc)


def jsonable(obj):
    """Replace non-finite floats with ``None`` so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), indent=2, allow_nan=False) + "\n"


def write_json(doc, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(doc))
    return path
