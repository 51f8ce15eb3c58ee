"""JSON model files.

A model file looks like::

    {"values": ["u"], "points": ["p0", "p1"], "opens": [["p0", "p1"]],
     "predicates": {"vote": {"p0": {"u": "T"}}}}

Entries left out of ``predicates`` are ``F``.  ``opens`` lists basis sets;
the whole point set is an open even when no listed union produces it.
Saving always writes the full table with sorted keys so that load followed
by save is byte-identical.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any, Iterable

from .kernel3 import TruthValue
from .semantics import Model
from .semitopo import Semitopology, natural_key

MODEL_KEYS = frozenset({"values", "points", "opens", "predicates"})


class FormatError(ValueError):
    pass


def dumps_json(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def model_to_dict(m: Model) -> dict:
    return {
        "values": list(m.values),
        "points": list(m.space.points),
        "opens": [sorted(b, key=natural_key) for b in m.space.basis],
        "predicates": {
            pred: {p: {v: str(m.interp[pred][p][v]) for v in m.values} for p in m.space.points}
            for pred in sorted(m.interp)
        },
    }


def dumps_model(m: Model) -> str:
    return dumps_json(model_to_dict(m))


def model_digest(m: Model) -> str:
    return hashlib.sha256(dumps_model(m).encode("utf-8")).hexdigest()


def _string_list(obj: Any, what: str) -> list[str]:
    if not isinstance(obj, list) or not all(isinstance(x, str) for x in obj):
        raise FormatError(f"{what} must be a list of strings")
    return obj


def model_from_dict(data: Any, extra_predicates: Iterable[str] = ()) -> Model:
    """Build a model; ``extra_predicates`` are declared even if absent (all ``F``)."""
    if not isinstance(data, dict):
        raise FormatError("a model file must contain a JSON object")
    unknown = set(data) - MODEL_KEYS
    if unknown:
        raise FormatError(f"unknown keys in model file: {sorted(unknown)}")
    for key in ("values", "points"):
        if key not in data:
            raise FormatError(f"model file lacks {key!r}")
    values = _string_list(data["values"], "values")
    points = _string_list(data["points"], "points")
    if len(set(values)) != len(values):
        raise FormatError("values must be distinct")
    if len(set(points)) != len(points):
        raise FormatError("points must be distinct")
    opens = data.get("opens", [])
    if not isinstance(opens, list):
        raise FormatError("opens must be a list of lists of points")
    basis = [_string_list(o, "each open") for o in opens]
    try:
        space = Semitopology(points, basis)
    except ValueError as exc:
        raise FormatError(str(exc)) from None

    table = data.get("predicates", {})
    if not isinstance(table, dict):
        raise FormatError("predicates must be an object")
    interp: dict[str, dict[str, dict[str, TruthValue]]] = {}
    for pred in sorted(set(table) | set(extra_predicates)):
        rows = table.get(pred, {})
        if not isinstance(rows, dict):
            raise FormatError(f"predicate {pred} must map points to objects")
        bad_points = set(rows) - set(points)
        if bad_points:
            raise FormatError(f"predicate {pred} mentions unknown points {sorted(bad_points)}")
        interp[pred] = {}
        for p in points:
            cells = rows.get(p, {})
            if not isinstance(cells, dict):
                raise FormatError(f"{pred} at {p} must map values to truth values")
            bad_values = set(cells) - set(values)
            if bad_values:
                raise FormatError(f"{pred} at {p} mentions unknown values {sorted(bad_values)}")
            row = {}
            for v in values:
                text = cells.get(v, "F")
                if not isinstance(text, str):
                    raise FormatError(f"{pred}({v}) at {p}: truth values are the strings T, B, F")
                try:
                    row[v] = TruthValue.parse(text)
                except ValueError as exc:
                    raise FormatError(f"{pred}({v}) at {p}: {exc}") from None
            interp[pred][p] = row
    return Model(tuple(values), space, interp)


def loads_model(text: str, extra_predicates: Iterable[str] = ()) -> Model:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"model file is not valid JSON: {exc}") from None
    return model_from_dict(data, extra_predicates)


def load_model(path: str, extra_predicates: Iterable[str] = ()) -> Model:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read(), extra_predicates)


def save_model(m: Model, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(m))
