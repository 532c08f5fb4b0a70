"""Deterministic JSON reports and CSV side tables.

Exact rationals are written as ``"num/den"`` strings, non-finite floats as
``"inf"``, ``"-inf"`` or ``"nan"``, other floats in shortest round-trip form.
Keys are sorted; the wall time lives in a separate ``metadata`` block so
everything else is byte-identical across runs.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import re
import sys
import types
import typing
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .errors import InputError
from .lojasiewicz import ClassicalFit, ProbeReport

SCHEMA_VERSION = 1
_RATIONAL = re.compile(r"^-?\d+/\d+$")
_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def encode(obj: Any) -> Any:
    """Turn dataclasses and friends into JSON-safe values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, complex):
        return {"re": encode(obj.real), "im": encode(obj.imag)}
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "tolist"):  # numpy scalars and arrays
        return encode(obj.tolist())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _key(k) -> str:
    if isinstance(k, str):
        return k
    e = encode(k)
    return e if isinstance(e, str) else json.dumps(e)


def _decode_untyped(data: Any) -> Any:
    if isinstance(data, str):
        if _RATIONAL.match(data):
            return Fraction(data)
        return _NONFINITE.get(data, data)
    if isinstance(data, list):
        return tuple(_decode_untyped(v) for v in data)
    if isinstance(data, dict):
        if set(data) == {"re", "im"}:
            return complex(_decode_float(data["re"]), _decode_float(data["im"]))
        return {k: _decode_untyped(v) for k, v in data.items()}
    return data


def _decode_float(v) -> float:
    if isinstance(v, str):
        if v in _NONFINITE:
            return _NONFINITE[v]
        raise InputError(f"expected a number, got {v!r}")
    return float(v)


def decode(tp: Any, data: Any) -> Any:
    """Inverse of :func:`encode`, driven by the type annotation ``tp``."""
    if tp is Any or tp is None:
        return _decode_untyped(data)
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin in (typing.Union, types.UnionType):
        if data is None and type(None) in args:
            return None
        errors = []
        for a in args:
            if a is type(None):
                continue
            try:
                return decode(a, data)
            except (TypeError, ValueError, KeyError, InputError) as exc:
                errors.append(exc)
        raise InputError(f"no union member of {tp} matches {data!r}: {errors}")
    if tp is Fraction:
        if not isinstance(data, (str, int)):
            raise TypeError(f"expected rational, got {data!r}")
        return Fraction(data)
    if tp is float:
        return _decode_float(data)
    if tp is int:
        if isinstance(data, bool) or not isinstance(data, int):
            raise TypeError(f"expected int, got {data!r}")
        return data
    if tp is bool:
        if not isinstance(data, bool):
            raise TypeError(f"expected bool, got {data!r}")
        return data
    if tp is str:
        if not isinstance(data, str):
            raise TypeError(f"expected str, got {data!r}")
        return data
    if tp is complex:
        return complex(_decode_float(data["re"]), _decode_float(data["im"]))
    if tp in (tuple, list, dict):
        out = _decode_untyped(data)
        return list(out) if tp is list and isinstance(out, tuple) else out
    if origin is list:
        return [decode(args[0], v) for v in data]
    if origin is tuple:
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(decode(args[0], v) for v in data)
        if len(args) != len(data):
            raise TypeError(f"tuple length mismatch for {tp}")
        return tuple(decode(a, v) for a, v in zip(args, data))
    if origin is dict:
        kt, vt = args
        return {decode(kt, k) if kt is not str else k: decode(vt, v) for k, v in data.items()}
    if isinstance(tp, type) and hasattr(tp, "from_json"):
        return tp.from_json(data)
    if dataclasses.is_dataclass(tp):
        if not isinstance(data, dict):
            raise TypeError(f"expected object for {tp.__name__}")
        hints = typing.get_type_hints(tp, vars(sys.modules[tp.__module__]))
        kwargs = {}
        for f in dataclasses.fields(tp):
            if f.name in data:
                kwargs[f.name] = decode(hints[f.name], data[f.name])
        return tp(**kwargs)
    return _decode_untyped(data)


# ---------------------------------------------------------------------------


def build_report(command: str, config: dict, payload: Any, verdict: str, wall_time: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "config": encode(config),
        "payload_type": type(payload).__name__,
        "payload": encode(payload),
        "verdict": verdict,
        "metadata": {"wall_time_s": round(wall_time, 6)},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_report(report: dict, path: str | Path | None) -> None:
    text = dumps(report)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def strip_metadata(text: str) -> str:
    data = json.loads(text)
    data.pop("metadata", None)
    return dumps(data)


def payload_types() -> dict[str, type]:
    from . import assoc, flatness, lojasiewicz, weights

    out: dict[str, type] = {}
    for mod in (weights, assoc, lojasiewicz, flatness):
        for name, obj in vars(mod).items():
            if isinstance(obj, type) and dataclasses.is_dataclass(obj):
                out.setdefault(name, obj)
    for cls in (HmPoint, HmTable, SeriesValue, Ex42Report):
        out[cls.__name__] = cls
    return out


def read_report(path_or_text: str | Path) -> tuple[dict, Any]:
    """Parse a report and decode its payload into the recorded type."""
    p = Path(path_or_text) if not str(path_or_text).lstrip().startswith("{") else None
    text = p.read_text(encoding="utf-8") if p is not None else str(path_or_text)
    data = json.loads(text)
    tp = payload_types().get(data.get("payload_type"))
    if tp is None:
        raise InputError(f"unknown payload type {data.get('payload_type')!r}")
    return data, decode(tp, data["payload"])


def write_csv(path: str | Path, header: list[str], rows: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_csv_cell(v) for v in row])


def _csv_cell(v):
    e = encode(v)
    return e if not isinstance(e, (list, dict)) else json.dumps(e, sort_keys=True)


# ---------------------------------------------------------------------------
# small payloads used only by the command line


@dataclasses.dataclass
class HmPoint:
    t: float
    value: float
    log_value: float
    minimizer: int


@dataclasses.dataclass
class HmTable:
    rows: list[HmPoint]


@dataclasses.dataclass
class SeriesValue:
    point: list[Fraction]
    J: list[int]
    value: Fraction
    degree_cap: int


@dataclasses.dataclass
class Ex42Report:
    probe: ProbeReport
    classical: ClassicalFit
    contrast: str
