"""CSV serialization of count traces and JSON report writing.

Floats are written with 17 significant digits, which round-trips IEEE
doubles exactly, so a written trace reads back bit-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .config import SourceMode
from .montecarlo import CountTrace

__all__ = [
    "PHOTON_HEADER",
    "CLASSICAL_HEADER",
    "read_trace_csv",
    "write_json_report",
    "write_trace_csv",
]

PHOTON_HEADER = ("bin", "time_s", "voltage_V", "psi_rad", "d1", "d2", "coinc")
CLASSICAL_HEADER = ("bin", "time_s", "voltage_V", "psi_rad", "i_gamma", "i_delta")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_trace_csv(trace: CountTrace, path) -> None:
    """Write a trace as UTF-8 CSV with LF line endings.

    Photon mode uses the 7-column schema ``bin,time_s,voltage_V,psi_rad,
    d1,d2,coinc`` (integer counts); classical mode the 6-column schema
    ``bin,time_s,voltage_V,psi_rad,i_gamma,i_delta``.
    """
    photon = trace.mode is SourceMode.PHOTON_COUNTING
    header = PHOTON_HEADER if photon else CLASSICAL_HEADER
    lines = [",".join(header)]
    for i in range(len(trace)):
        row = [
            str(int(trace.bin_index[i])),
            _fmt(trace.time[i]),
            _fmt(trace.voltage[i]),
            _fmt(trace.psi[i]),
        ]
        if photon:
            row += [str(int(trace.singles_d1[i])), str(int(trace.singles_d2[i])),
                    str(int(trace.coincidences[i]))]
        else:
            row += [_fmt(trace.singles_d1[i]), _fmt(trace.singles_d2[i])]
        lines.append(",".join(row))
    data = "\n".join(lines) + "\n"
    try:
        Path(path).write_text(data, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write trace CSV {path}: {exc}") from exc


def read_trace_csv(path) -> CountTrace:
    """Read a trace CSV written by :func:`write_trace_csv`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read trace CSV {path}: {exc}") from exc
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty trace file")
    header = tuple(lines[0].split(","))
    if header == PHOTON_HEADER:
        photon = True
    elif header == CLASSICAL_HEADER:
        photon = False
    else:
        raise ValueError(f"{path}: unrecognised trace header {lines[0]!r}")

    columns = [[] for _ in header]
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(header):
            raise ValueError(f"{path}:{lineno}: expected {len(header)} columns, got {len(fields)}")
        for col, value in zip(columns, fields):
            col.append(value)

    counts = np.int64 if photon else float
    trace = CountTrace(
        mode=SourceMode.PHOTON_COUNTING if photon else SourceMode.CLASSICAL_INTENSITY,
        bin_index=np.array(columns[0], dtype=np.int64),
        time=np.array(columns[1], dtype=float),
        voltage=np.array(columns[2], dtype=float),
        psi=np.array(columns[3], dtype=float),
        singles_d1=np.array(columns[4], dtype=counts),
        singles_d2=np.array(columns[5], dtype=counts),
        coincidences=(np.array(columns[6], dtype=np.int64) if photon
                      else np.zeros(len(columns[0]))),
    )
    trace.validate()
    return trace


def write_json_report(payload: dict, path) -> None:
    """Write a JSON report with stable formatting (LF, 2-space indent)."""
    data = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    try:
        Path(path).write_text(data, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write report {path}: {exc}") from exc
