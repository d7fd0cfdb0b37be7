# sympgrass/engine/report_exporter.py
# Report and curve export
#
#   <suite>.json   {name, pass, metrics, per_trial, config, seed_algorithm}
#   <suite>.csv    one row per trial, metric columns, 17 significant digits
#   curve.json     [{t, frame}, ...]
#
# JSON keys are sorted and floats use repr, so the same report always
# serialises to the same bytes.

import json
import logging
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from sympgrass.engine.errors import ExportError
from sympgrass.engine.geodesics import OrbitCurve
from sympgrass.models.experiment_models import ExperimentReport

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"
CSV_FIXED_COLUMNS = ["trial", "pass"]


# ── Content helpers ───────────────────────────────────────────────────────────

def _clean(value):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if is_dataclass(value) and not isinstance(value, type):
        return _clean(asdict(value))
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


def report_to_json(report: ExperimentReport) -> str:
    payload = _clean(report.model_dump(by_alias=True, mode="python"))
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write_text(path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc
    return path


# ── Reports ───────────────────────────────────────────────────────────────────

def write_report(report: ExperimentReport, path) -> Path:
    out = _write_text(path, report_to_json(report))
    logger.info(f"[Export] report {report.name} → {out}")
    return out


def metric_columns(report: ExperimentReport) -> list:
    names = set()
    for record in report.per_trial:
        names.update(k for k, v in record.items()
                     if k not in CSV_FIXED_COLUMNS and isinstance(v, (int, float)) and not isinstance(v, bool))
    return CSV_FIXED_COLUMNS + sorted(names)


def emit_csv(report: ExperimentReport, path) -> Path:
    """
    Write the per-trial table.

    Parameters
    ----------
    report : ExperimentReport with per_trial records (may be empty)
    path   : target file; parent directories are created

    Returns
    -------
    Path of the written file. An empty per_trial list gives a header-only file.
    """
    columns = metric_columns(report)
    frame = pd.DataFrame(report.per_trial, columns=columns)
    if len(frame):
        frame["pass"] = frame["pass"].astype("Int64")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc
    logger.info(f"[Export] {len(frame)} trial rows → {path}")
    return path


def read_csv(path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


# ── Curves ────────────────────────────────────────────────────────────────────

def curve_to_records(c: OrbitCurve) -> list:
    return [{"t": float(t), "frame": p.frame.tolist()} for t, p in zip(c.times, c.points)]


def write_curve(c: OrbitCurve, path) -> Path:
    text = json.dumps(curve_to_records(c), indent=1) + "\n"
    return _write_text(path, text)


def read_curve_records(path) -> list:
    try:
        records = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc}") from exc
    return [(float(r["t"]), np.array(r["frame"], dtype=float)) for r in records]
