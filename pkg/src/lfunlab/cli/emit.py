"""Record serialization: JSONL with 17 significant digits, flattened CSV, run manifest."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable

FLOAT_FORMAT = ".17g"


def _scalar(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return json.dumps(str(v))
        text = format(v, FLOAT_FORMAT)
        # keep floats recognizable as floats after parsing
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(v, complex):
        return _dumps({"re": v.real, "im": v.imag})
    return json.dumps(str(v) if not isinstance(v, str) else v)


def _dumps(obj) -> str:
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ", ".join(json.dumps(str(k)) + ": " + _dumps(v) for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return _dumps(obj.item())
    return _scalar(obj)


def dumps_record(record: dict) -> str:
    """One JSON line with sorted keys and every float at 17 significant digits."""
    return _dumps(record)


def flatten(record: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in record.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = _dumps(v)
        else:
            out[key] = v
    return out


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _scalar(v)
    return str(v)


def write_jsonl(records: Iterable[dict], path: Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(dumps_record(rec) + "\n")
            n += 1
    return n


def records_to_csv(records: list[dict]) -> str:
    flat = [flatten(r) for r in records]
    header = sorted({k for r in flat for k in r})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    for r in flat:
        w.writerow([_csv_cell(r.get(k)) for k in header])
    return buf.getvalue()


def write_csv(records: Iterable[dict], path: Path) -> int:
    records = list(records)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))
    return len(records)


def jsonl_to_csv(src: Path, dst: Path) -> int:
    with open(src, encoding="utf-8") as fh:
        records = [json.loads(line) for line in fh if line.strip()]
    return write_csv(records, dst)


def parse_csv_value(text: str):
    """Inverse of the CSV cell format for scalar fields."""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def write_manifest(out: Path, manifest: dict) -> Path:
    path = manifest_path(out)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return path
