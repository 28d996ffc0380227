"""Canonical JSON/CSV emission.

Floats are written with 17 significant digits so repeated runs are
byte-identical and round-trip exactly; the stdlib json module does not let
float formatting be overridden, hence the small hand-rolled emitter.
"""
from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import InputError


def fmt_float(x: float) -> str:
    x = float(x) + 0.0  # normalizes -0.0
    if not math.isfinite(x):
        raise InputError(f"non-finite value {x!r} cannot be serialized")
    return format(x, ".17g")


def dumps(obj: Any, indent: int = 0) -> str:
    """Serialize to JSON with deterministic float formatting.

    Dict insertion order is preserved; construct payloads in canonical order.
    """
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps(v, indent + 2) for v in obj]
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k, v in obj.items():
            if not isinstance(k, str):
                raise InputError(f"JSON object keys must be strings, got {k!r}")
            items.append(inner + json.dumps(k) + ": " + dumps(v, indent + 2))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise InputError(f"cannot serialize object of type {type(obj).__name__}")


def dump_text(obj: Any) -> str:
    return dumps(obj) + "\n"


def csv_text(header: list[str], rows: list[list[Any]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for c in row:
            if isinstance(c, (float, np.floating)):
                cells.append(fmt_float(float(c)))
            else:
                cells.append(str(c))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
