"""JSON-lines and CSV emission of experiment records.

JSON numbers use Python's shortest round-trip representation, so parsing a
line back gives bit-identical floats.  Non-finite values, which JSON cannot
represent, are written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from ..records import ExperimentRecord

FIELDS = ("experiment_id", "model", "dim", "seed", "lhs", "rhs", "slack", "flags", "passed", "extra")
FLOAT_FIELDS = ("lhs", "rhs", "slack")


def _encode_float(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _decode_float(x):
    return float(x)


def _encode_extra(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return _encode_float(v)


def record_to_dict(rec: ExperimentRecord):
    return {
        "experiment_id": rec.experiment_id,
        "model": rec.model,
        "dim": rec.dim,
        "seed": rec.seed,
        "lhs": _encode_float(rec.lhs),
        "rhs": _encode_float(rec.rhs),
        "slack": _encode_float(rec.slack),
        "flags": sorted(rec.flags),
        "passed": rec.passed,
        "extra": {k: _encode_extra(v) for k, v in rec.extra.items()},
    }


def record_from_dict(d) -> ExperimentRecord:
    extra = {k: (v if isinstance(v, (bool, int)) else _decode_float(v)) for k, v in d["extra"].items()}
    return ExperimentRecord(
        experiment_id=d["experiment_id"], model=d["model"], dim=int(d["dim"]), seed=int(d["seed"]),
        lhs=_decode_float(d["lhs"]), rhs=_decode_float(d["rhs"]), slack=_decode_float(d["slack"]),
        flags=frozenset(d["flags"]), passed=bool(d["passed"]), extra=extra,
    )


def to_json_lines(records):
    return "".join(json.dumps(record_to_dict(r), allow_nan=False) + "\n" for r in records)


def from_json_lines(text):
    return [record_from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def to_csv(records):
    records = list(records)
    keys = sorted({k for r in records for k in r.extra})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f for f in FIELDS if f != "extra"] + [f"extra.{k}" for k in keys])
    for r in records:
        row = [r.experiment_id, r.model, r.dim, r.seed, repr(r.lhs), repr(r.rhs), repr(r.slack),
               ";".join(sorted(r.flags)), r.passed]
        row += [_csv_cell(r.extra[k]) if k in r.extra else "" for k in keys]
        w.writerow(row)
    return buf.getvalue()


def emit_reports(records, fmt, path):
    """Write ``records`` to ``path`` as ``json`` lines or ``csv``; returns the path."""
    path = Path(path)
    if fmt in ("json", "json_lines"):
        text = to_json_lines(records)
    elif fmt == "csv":
        text = to_csv(records)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def slack_histogram_csv(records, bins=40):
    """Per-experiment histogram of finite slacks, as CSV rows ``experiment,lo,hi,count``."""
    groups = {}
    for r in records:
        if math.isfinite(r.slack):
            groups.setdefault(r.experiment_id.split("/", 1)[0] or r.model, []).append(r.slack)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "bin_lo", "bin_hi", "count"])
    for name, vals in groups.items():
        counts, edges = np.histogram(vals, bins=bins)
        for c, lo, hi in zip(counts, edges[:-1], edges[1:]):
            w.writerow([name, repr(float(lo)), repr(float(hi)), int(c)])
    return buf.getvalue()


def summary_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "count", "pass_rate", "min_slack", "min_slack_seed", "n_failing"])
    for r in rows:
        w.writerow([r.experiment, r.count, repr(r.pass_rate), repr(float(r.min_slack)),
                    r.min_slack_seed, len(r.failing_seeds)])
    return buf.getvalue()
