"""Serialization of pipeline reports and certificates."""

from __future__ import annotations

import json
import math
from pathlib import Path


def _native(obj):
    """Replace non-finite floats (not valid JSON) by strings and tuples by lists."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {str(k): _native(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_native(v) for v in obj]
    return obj


def to_json(data):
    """Deterministic JSON text: sorted keys, fixed separators, trailing newline."""
    if hasattr(data, "to_dict"):
        data = data.to_dict()
    return json.dumps(_native(data), sort_keys=True, indent=1, allow_nan=False) + "\n"


def emit_report(report, path, fmt=None):
    """Write ``report`` as ``json`` or ``svg`` (inferred from the suffix)."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "json").lower()
    if fmt == "json":
        path.write_text(to_json(report))
    elif fmt == "svg":
        from .plotting import render_svg
        render_svg(report, path)
    else:
        raise ValueError(f"unknown report format {fmt!r}; use json or svg")
    return path


def load_report(path):
    with open(path) as fh:
        return json.load(fh)
