"""CSV and JSON formats used by the command-line tool.

Input CSVs are UTF-8 with a header row and ``.`` as decimal separator:

* recordings: ``timestamp_s,temperature_c,humidity_rh``
* raw ADC:    ``t_adc,h_adc,p_adc``
* step trace: ``time_s,value``
* calibration points: ``sensor_value,reference_value``

Floats are written with ``repr`` so that a file round-trips exactly and
repeated runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import ParseError
from .pipeline import UqReport

__all__ = [
    "SCHEMA_VERSION",
    "RECORDING_COLUMNS",
    "RAW_ADC_COLUMNS",
    "TRACE_COLUMNS",
    "POINTS_COLUMNS",
    "COMPENSATED_COLUMNS",
    "REPORT_COLUMNS",
    "read_columns",
    "write_columns",
    "read_recording",
    "write_recording",
    "report_rows",
    "write_reports",
    "summarize",
    "dump_json",
]

SCHEMA_VERSION = "1.0"

RECORDING_COLUMNS = ("timestamp_s", "temperature_c", "humidity_rh")
RAW_ADC_COLUMNS = ("t_adc", "h_adc", "p_adc")
TRACE_COLUMNS = ("time_s", "value")
POINTS_COLUMNS = ("sensor_value", "reference_value")
COMPENSATED_COLUMNS = ("t_adc", "h_adc", "p_adc", "t_out_c", "h_out_rh", "p_out_pa")
REPORT_COLUMNS = (
    "window_index",
    "mu_t",
    "mu_h",
    "sigma_t",
    "sigma_h",
    "skew_t",
    "skew_h",
    "kurt_t",
    "kurt_h",
    "gate_passed",
    "rho",
    "sigma_hat_h",
    "reduction_fraction",
)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def read_columns(
    source: str | Path | TextIO, columns: Sequence[str], integer: bool = False
) -> dict[str, np.ndarray]:
    """Read the named columns of a headered CSV into float arrays.

    Extra columns are ignored. Every error is a ParseError carrying the
    1-based line number.
    """
    if isinstance(source, (str, Path)):
        name = str(source)
        with open(source, newline="", encoding="utf-8") as fh:
            return _read_columns(fh, columns, integer, name)
    return _read_columns(source, columns, integer, getattr(source, "name", None))


def _read_columns(fh: TextIO, columns: Sequence[str], integer: bool, name: str | None):
    reader = csv.reader(fh)
    header = None
    for row in reader:
        if row and any(cell.strip() for cell in row):
            header = [cell.strip() for cell in row]
            break
    if header is None:
        raise ParseError("file is empty; expected a header row", 1, name)
    missing = [c for c in columns if c not in header]
    if missing:
        raise ParseError(
            f"header is missing column(s) {', '.join(missing)}; expected {','.join(columns)}",
            reader.line_num,
            name,
        )
    idx = [header.index(c) for c in columns]
    data: list[list[float]] = [[] for _ in columns]
    for row in reader:
        if not row or not any(cell.strip() for cell in row):
            continue
        line = reader.line_num
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line, name)
        for k, j in enumerate(idx):
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"column {columns[k]!r}: not a number: {cell!r}", line, name) from None
            if not math.isfinite(v):
                raise ParseError(f"column {columns[k]!r}: non-finite value {cell!r}", line, name)
            if integer and v != int(v):
                raise ParseError(f"column {columns[k]!r}: expected an integer, got {cell!r}", line, name)
            data[k].append(v)
    return {c: np.asarray(d, dtype=np.float64) for c, d in zip(columns, data)}


def write_columns(dest: str | Path | TextIO, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            write_columns(fh, columns, rows)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def read_recording(source: str | Path | TextIO) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(timestamp_s, temperature_c, humidity_rh)`` arrays."""
    cols = read_columns(source, RECORDING_COLUMNS)
    return tuple(cols[c] for c in RECORDING_COLUMNS)


def write_recording(dest, timestamp_s, temperature_c, humidity_rh) -> None:
    write_columns(dest, RECORDING_COLUMNS, zip(timestamp_s, temperature_c, humidity_rh))


def report_rows(reports: Sequence[UqReport]):
    for i, r in enumerate(reports):
        yield (
            i,
            r.mu_t,
            r.mu_h,
            r.sigma_t,
            r.sigma_h,
            r.skew_t,
            r.skew_h,
            r.kurt_t,
            r.kurt_h,
            r.gate_passed,
            r.rho,
            r.sigma_hat_h,
            r.reduction_fraction,
        )


def write_reports(dest, reports: Sequence[UqReport]) -> None:
    write_columns(dest, REPORT_COLUMNS, report_rows(reports))


def summarize(reports: Sequence[UqReport], **extra) -> dict:
    """Aggregate a run: mean reduction, gate pass rate, and averaged sigmas."""
    n = len(reports)
    gated = [r for r in reports if r.gate_passed is not None]
    passed = [r for r in gated if r.gate_passed]
    reasons: dict[str, int] = {}
    for r in gated:
        if not r.gate_passed:
            key = r.gate_reason.split(":", 1)[0] or "unknown"
            reasons[key] = reasons.get(key, 0) + 1
    out = {
        "schema_version": SCHEMA_VERSION,
        **extra,
        "n_windows": n,
        "mean_mu_t": _mean(r.mu_t for r in reports),
        "mean_mu_h": _mean(r.mu_h for r in reports),
        "mean_sigma_t": _mean(r.sigma_t for r in reports),
        "mean_sigma_h": _mean(r.sigma_h for r in reports),
        "mean_sigma_hat_h": _mean(r.sigma_hat_h for r in reports),
        "mean_reduction_fraction": _mean(r.reduction_fraction for r in reports),
        "gate_pass_rate": (len(passed) / len(gated)) if gated else None,
        "reduced_window_fraction": (sum(r.reduction_fraction > 0 for r in reports) / n) if n else None,
        "gate_fail_reasons": dict(sorted(reasons.items())),
    }
    return out


def _mean(values: Iterable[float]) -> float | None:
    vals = list(values)
    return math.fsum(vals) / len(vals) if vals else None


def dump_json(obj, dest: str | Path | TextIO | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if dest is None:
        return text
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)
    return text


def to_text(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    write_columns(buf, columns, rows)
    return buf.getvalue()
