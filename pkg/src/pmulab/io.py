"""CSV export/import for waveforms, phasor streams and reports.

All numeric columns are written in scientific notation with a configurable
significant-digit count (environment variable ``PMULAB_PRECISION_DIGITS``,
default 17) so that full double precision survives a round trip.  Data
files contain no wall-clock content; identical inputs produce byte-identical
files.  Streams and waveforms get a ``.meta`` sidecar holding their
provenance as sorted ``key=value`` lines.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .analysis import AnalysisRecord
from .estimator import PhasorStream, TimestampConvention, WindowSpec
from .signal import Waveform
from .response import ResponsePoint

__all__ = [
    "precision_digits",
    "meta_path",
    "write_meta",
    "read_meta",
    "write_waveform_csv",
    "read_waveform_csv",
    "write_phasor_csv",
    "read_phasor_csv",
    "write_response_csv",
    "write_analysis_csv",
]

PRECISION_ENV = "PMULAB_PRECISION_DIGITS"
DEFAULT_DIGITS = 17


def precision_digits() -> int:
    """Significant digits for CSV numbers; at least 15 for reversibility."""
    raw = os.environ.get(PRECISION_ENV, "")
    try:
        digits = int(raw) if raw else DEFAULT_DIGITS
    except ValueError:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}")
    return max(digits, 15)


def _fmt(x: float, digits: int) -> str:
    return f"{x:.{digits - 1}e}"


def meta_path(path: Path | str) -> Path:
    return Path(path).with_suffix(".meta")


def write_meta(path: Path | str, fields: dict) -> None:
    lines = [f"{k}={fields[k]}" for k in sorted(fields)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def read_meta(path: Path | str) -> dict:
    """Parse ``key=value`` lines back into int/float/str values."""
    out: dict = {}
    for line in Path(path).read_text(encoding="ascii").splitlines():
        if not line.strip():
            continue
        key, _, raw = line.partition("=")
        value: object = raw
        try:
            value = int(raw)
        except ValueError:
            try:
                value = float(raw)
            except ValueError:
                pass
        out[key] = value
    return out


def write_waveform_csv(path: Path | str, x: Waveform, sidecar: bool = True) -> None:
    """Write ``sample_index,time_s,value`` rows plus a ``.meta`` sidecar."""
    d = precision_digits()
    p = x.sample_indices
    t = x.times
    lines = ["sample_index,time_s,value"]
    lines.extend(
        f"{int(p[i])},{_fmt(t[i], d)},{_fmt(x.samples[i], d)}" for i in range(x.n_samples)
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
    if sidecar:
        fields = dict(x.meta)
        fields.setdefault("fs_hz", x.fs)
        fields.setdefault("start_index", x.start_index)
        write_meta(meta_path(path), fields)


def read_waveform_csv(path: Path | str, fs: float | None = None) -> Waveform:
    """Load a waveform CSV; the sampling rate comes from the sidecar unless given."""
    path = Path(path)
    meta: dict = {}
    mp = meta_path(path)
    if mp.exists():
        meta = read_meta(mp)
    if fs is None:
        fs = meta.get("fs_hz")
    rows = path.read_text(encoding="ascii").splitlines()
    if not rows or rows[0] != "sample_index,time_s,value":
        raise ValueError(f"{path} is not a waveform CSV")
    idx: list[int] = []
    val: list[float] = []
    t: list[float] = []
    for row in rows[1:]:
        if not row.strip():
            continue
        a, b, c = row.split(",")
        idx.append(int(a))
        t.append(float(b))
        val.append(float(c))
    if fs is None:
        if len(t) < 2:
            raise ValueError("cannot infer fs from a single sample; pass fs")
        fs = round((len(t) - 1) / (t[-1] - t[0]), 6)
    return Waveform(
        samples=np.array(val), fs=float(fs), start_index=idx[0] if idx else 0, meta=meta
    )


def write_phasor_csv(path: Path | str, stream: PhasorStream) -> None:
    """Write ``frame_index,timestamp_s,mag_rms,angle_rad,real,imag`` plus sidecar.

    Angles are principal values in (-pi, pi].
    """
    d = precision_digits()
    mag = stream.magnitude
    ang = stream.angle
    re = stream.values.real
    im = stream.values.imag
    lines = ["frame_index,timestamp_s,mag_rms,angle_rad,real,imag"]
    lines.extend(
        f"{int(stream.frame_indices[i])},{_fmt(stream.timestamps[i], d)},"
        f"{_fmt(mag[i], d)},{_fmt(ang[i], d)},{_fmt(re[i], d)},{_fmt(im[i], d)}"
        for i in range(len(stream))
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
    write_meta(meta_path(path), stream.metadata)


def read_phasor_csv(path: Path | str) -> PhasorStream:
    """Rebuild a phasor stream from a CSV and its ``.meta`` sidecar."""
    path = Path(path)
    mp = meta_path(path)
    if not mp.exists():
        raise ValueError(f"metadata sidecar {mp} not found; cannot rebuild the stream")
    meta = read_meta(mp)
    for key in ("h", "n_per_cycle", "fps"):
        if key not in meta:
            raise ValueError(f"metadata sidecar {mp} lacks required key {key!r}")
    rows = path.read_text(encoding="ascii").splitlines()
    if not rows or rows[0] != "frame_index,timestamp_s,mag_rms,angle_rad,real,imag":
        raise ValueError(f"{path} is not a phasor CSV")
    m: list[int] = []
    ts: list[float] = []
    values: list[complex] = []
    for row in rows[1:]:
        if not row.strip():
            continue
        cells = row.split(",")
        m.append(int(cells[0]))
        ts.append(float(cells[1]))
        values.append(complex(float(cells[4]), float(cells[5])))
    window = WindowSpec(
        h=int(meta["h"]),
        n_per_cycle=int(meta["n_per_cycle"]),
        timestamp_convention=TimestampConvention(
            meta.get("timestamp_convention", "left")
        ),
    )
    return PhasorStream(
        frame_indices=np.array(m),
        timestamps=np.array(ts),
        values=np.array(values),
        fps=float(meta["fps"]),
        window=window,
        metadata=meta,
    )


def write_response_csv(path: Path | str, rows: list[ResponsePoint]) -> None:
    """Write ``fm_hz,h,L,G,theta_deg,classification`` rows."""
    d = precision_digits()
    lines = ["fm_hz,h,L,G,theta_deg,classification"]
    lines.extend(
        f"{_fmt(r.fm_hz, d)},{r.h},{r.length},{_fmt(r.g, d)},"
        f"{_fmt(r.theta_deg, d)},{r.classification.value}"
        for r in rows
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def write_analysis_csv(path: Path | str, records: list[AnalysisRecord]) -> None:
    """Write analysis report rows.

    Angle-channel amplitudes are emitted in degrees (the presentation unit
    of angle oscillations); magnitude-channel amplitudes stay in RMS
    per-unit.  Unrecoverable rows carry ``nan`` recovery fields.
    """
    d = precision_digits()
    lines = [
        "channel,fm_hz,A_meas,phi_meas_deg,A_rec,phi_rec_deg,G,theta_deg,"
        "residual_rms,recoverable"
    ]
    for r in records:
        to_unit = np.degrees if r.channel.value == "angle" else (lambda v: v)
        a_meas = float(to_unit(r.a_meas))
        a_rec = float(to_unit(r.a_rec)) if r.recoverable else float("nan")
        phi_rec = np.degrees(r.phi_rec) if r.recoverable else float("nan")
        lines.append(
            f"{r.channel.value},{_fmt(r.fm_hz, d)},{_fmt(a_meas, d)},"
            f"{_fmt(np.degrees(r.phi_meas), d)},{_fmt(a_rec, d)},{_fmt(phi_rec, d)},"
            f"{_fmt(r.gain.g, d)},{_fmt(r.gain.theta_deg, d)},"
            f"{_fmt(float(to_unit(r.residual_rms)), d)},{str(r.recoverable).lower()}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
