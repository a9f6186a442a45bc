"""Report envelope and JSON/CSV emission.

JSON reports have the top-level keys ``command, params, results, mismatches,
assertions, elapsed_ms, seed, version``.  Integers outside the exactly
representable float range are written as decimal strings, and fractions as
``"num/den"``, so no exact value is ever rounded.
"""
from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import sys
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__

FLOAT_SAFE = 1 << 53


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        n = int(obj)
        return n if -FLOAT_SAFE <= n <= FLOAT_SAFE else str(n)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return to_jsonable(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.name != "elapsed_ms"}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def make_report(
    command: str,
    params: dict,
    results: list,
    *,
    mismatches: list | None = None,
    assertions: list | None = None,
    seed: int = 0,
    elapsed_ms: float = 0.0,
) -> dict:
    return {
        "command": command,
        "params": to_jsonable(params),
        "results": to_jsonable(results),
        "mismatches": to_jsonable(mismatches or []),
        "assertions": to_jsonable(assertions or []),
        "elapsed_ms": round(elapsed_ms, 3),
        "seed": seed,
        "version": __version__,
    }


def report_passed(report: dict) -> bool:
    return not report["mismatches"] and all(a["pass"] for a in report["assertions"])


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _flatten(row: Any, prefix: str = "") -> dict:
    if not isinstance(row, dict):
        return {prefix or "value": json.dumps(row) if isinstance(row, list) else row}
    out = {}
    for k, v in row.items():
        key = f"{prefix}.{k}" if prefix else k
        if isinstance(v, dict):
            out.update(_flatten(v, key))
        elif isinstance(v, list):
            out[key] = json.dumps(v, separators=(",", ":"))
        else:
            out[key] = v
    return out


def render_csv(report: dict) -> str:
    rows = [_flatten(r) for r in report["results"]]
    header: list[str] = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def emit_report(report: dict, fmt: str = "json", path: str | None = None) -> None:
    """Write ``report`` as json or csv to ``path`` (stdout when None or "-")."""
    if fmt == "json":
        text = render_json(report)
    elif fmt == "csv":
        text = render_csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def strip_timing(report: dict) -> dict:
    """Copy of ``report`` without ``elapsed_ms``, for golden comparisons."""
    return {k: v for k, v in report.items() if k != "elapsed_ms"}
