"""Text formats: one-value-per-line signals, JSON results documents, CSV traces/profiles."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .errors import ParseError, SchemaError
from .experiments import AggregateRow, ProfileCurve, TrialRecord

SCHEMA_VERSION = "1"
SIGNAL_HEADER = "value"
_RECORD_FIELDS = ("algorithm", "n", "seed", "elapsed_seconds", "mse1", "mse2")


def format_value(v: float) -> str:
    # 17 significant digits round-trip any IEEE double
    return format(float(v), ".17g")


def write_signal(path, values, header: bool = True) -> None:
    lines = [SIGNAL_HEADER] if header else []
    lines.extend(format_value(v) for v in np.asarray(values, dtype=np.float64).ravel())
    Path(path).write_text("\n".join(lines) + "\n")


def read_signal(path) -> np.ndarray:
    """Read a signal file; an optional first line ``value`` is skipped, blank lines are ignored."""
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if lineno == 1 and line == SIGNAL_HEADER:
                continue
            try:
                v = float(line)
            except ValueError:
                raise ParseError(f"not a number: {line!r}", lineno) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {line!r}", lineno)
            values.append(v)
    return np.array(values, dtype=np.float64)


def write_trace(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["pass", "k", "E"])
        for rec in records:
            w.writerow([rec.outer_pass, rec.k, format_value(rec.error)])


def write_profile(path, curves: list[ProfileCurve]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "tau", "rho"])
        for curve in curves:
            for tau, rho in curve.points:
                w.writerow([curve.algorithm, format_value(tau), format_value(rho)])


def _json_float(v: float):
    return v if math.isfinite(v) else None


def record_to_json(rec: TrialRecord) -> dict:
    d = asdict(rec)
    d["elapsed_seconds"] = _json_float(rec.elapsed_seconds)
    d["mse2"] = _json_float(rec.mse2)
    return d


def record_from_json(d: dict, where: str = "record") -> TrialRecord:
    if not isinstance(d, dict):
        raise SchemaError(f"{where}: expected an object")
    missing = [k for k in _RECORD_FIELDS if k not in d]
    if missing:
        raise SchemaError(f"{where}: missing {', '.join(missing)}")
    failed = bool(d.get("failed", False)) or d["elapsed_seconds"] is None
    try:
        return TrialRecord(
            algorithm=str(d["algorithm"]),
            n=int(d["n"]),
            trial=int(d.get("trial", 0)),
            seed=int(d["seed"]),
            elapsed_seconds=math.inf if d["elapsed_seconds"] is None else float(d["elapsed_seconds"]),
            mse1=float(d["mse1"]),
            mse2=math.nan if d["mse2"] is None else float(d["mse2"]),
            failed=failed,
            error=d.get("error"),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def results_document(config: dict, records, rows: list[AggregateRow]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "records": [record_to_json(r) for r in records],
        "aggregate": [{k: _json_float(v) if isinstance(v, float) else v for k, v in asdict(row).items()}
                      for row in rows],
    }


def write_results(path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")


def read_results(path) -> tuple[dict, list[TrialRecord]]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("results document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")
    raw = doc.get("records")
    if not isinstance(raw, list):
        raise SchemaError("'records' must be an array")
    records = [record_from_json(r, f"records[{i}]") for i, r in enumerate(raw)]
    return doc.get("config", {}), records
