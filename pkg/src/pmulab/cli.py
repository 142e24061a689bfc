"""Command-line front end.

Subcommands cover the full pipeline: ``synth`` writes a modulated waveform
CSV, ``estimate`` turns it into a phasor stream, ``response`` tabulates the
window gain, ``analyze`` fits and inverts an oscillation in a stream,
``recover`` inverts explicitly given measured values, and
``reproduce table1`` regenerates the built-in validation table and checks
every cell.

Angles cross this boundary in degrees; the library works in radians
internally.  Modulation indices keep their natural units (dimensionless for
magnitude, radians for phase).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .analysis import analyze_stream, recover, OscillationEstimate
from .estimator import (
    ReportingSpec,
    TimestampConvention,
    WindowSpec,
    design_antialias,
    estimate_phasors,
)
from .response import Channel, response_curve
from .signal import ModulationKind, ModulationSpec, WaveformSpec, synthesize
from .validation import reproduce_table1

__all__ = ["main", "build_parser"]


def _add_signal_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vrms", type=float, default=1.0, help="RMS magnitude [p.u.]")
    p.add_argument("--f0", type=float, default=60.0, help="carrier frequency [Hz]")
    p.add_argument("--fs", type=float, default=960.0, help="sampling rate [Hz]")
    p.add_argument("--phi0", type=float, default=0.0, help="carrier phase [deg]")
    p.add_argument(
        "--kind",
        choices=[k.value for k in ModulationKind],
        default="none",
        help="modulation mechanism",
    )
    p.add_argument(
        "--index",
        "--alpha",
        "--beta",
        dest="index",
        type=float,
        default=0.0,
        help="modulation index (dimensionless for magnitude, rad for phase)",
    )
    p.add_argument("--fm", type=float, default=0.0, help="oscillation frequency [Hz]")
    p.add_argument("--phim", type=float, default=0.0, help="oscillation phase [deg]")
    p.add_argument("--duration", type=float, default=4.0, help="record length [s]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmulab",
        description="Windowed-DFT phasor estimation laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a modulated waveform CSV")
    _add_signal_args(p)
    p.add_argument("--out", required=True, help="output waveform CSV path")

    p = sub.add_parser("estimate", help="estimate a phasor stream from a waveform CSV")
    p.add_argument("--in", dest="infile", required=True, help="input waveform CSV")
    p.add_argument("--h", dest="h", type=int, default=1, help="window length [cycles]")
    p.add_argument("--fps", type=float, default=60.0, help="reporting rate [frames/s]")
    p.add_argument("--f0", type=float, default=None, help="carrier frequency override [Hz]")
    p.add_argument("--fs", type=float, default=None, help="sampling rate override [Hz]")
    p.add_argument(
        "--antialias", action="store_true", help="low-pass filter before decimation"
    )
    p.add_argument(
        "--timestamp",
        choices=["left", "center"],
        default="left",
        help="frame timestamp convention",
    )
    p.add_argument(
        "--offset", type=int, default=0, help="decimation phase [samples, 0..D-1]"
    )
    p.add_argument("--out", required=True, help="output phasor CSV path")

    p = sub.add_parser("response", help="tabulate window gain versus frequency")
    p.add_argument("--h", default="1,2,4,8", help="comma-separated window lengths [cycles]")
    p.add_argument("--fs", type=float, default=960.0, help="sampling rate [Hz]")
    p.add_argument("--f0", type=float, default=60.0, help="carrier frequency [Hz]")
    p.add_argument("--fmin", type=float, default=0.1, help="grid start [Hz]")
    p.add_argument("--fmax", type=float, default=30.0, help="grid end [Hz]")
    p.add_argument("--step", type=float, default=0.1, help="grid step [Hz]")
    p.add_argument("--out", required=True, help="output response CSV path")

    p = sub.add_parser("analyze", help="fit and invert an oscillation in a phasor CSV")
    p.add_argument("--in", dest="infile", required=True, help="input phasor CSV")
    p.add_argument(
        "--channel",
        choices=[c.value for c in Channel],
        default="magnitude",
        help="stream channel carrying the oscillation",
    )
    p.add_argument(
        "--fm",
        type=float,
        default=None,
        help="known oscillation frequency [Hz]; estimated from the spectrum if omitted",
    )
    p.add_argument("--out", required=True, help="output report CSV path")

    p = sub.add_parser("recover", help="invert the window gain for given measured values")
    p.add_argument("--a-meas", type=float, required=True, help="measured amplitude")
    p.add_argument("--phi-meas", type=float, required=True, help="measured phase [deg]")
    p.add_argument("--fm", type=float, required=True, help="oscillation frequency [Hz]")
    p.add_argument("--h", dest="h", type=int, required=True, help="window length [cycles]")
    p.add_argument("--fs", type=float, default=960.0, help="sampling rate [Hz]")
    p.add_argument("--f0", type=float, default=60.0, help="carrier frequency [Hz]")
    p.add_argument(
        "--channel",
        choices=[c.value for c in Channel],
        default="magnitude",
        help="channel of the measured amplitude",
    )

    p = sub.add_parser("reproduce", help="regenerate built-in validation data")
    p.add_argument("target", choices=["table1"], help="what to reproduce")
    p.add_argument("--antialias", action="store_true", help="filter the 60 fps pipelines")
    p.add_argument("--out", default=None, help="optional machine-readable CSV path")

    return parser


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = WaveformSpec.with_duration(
        args.duration,
        v_rms=args.vrms,
        f0=args.f0,
        fs=args.fs,
        phi0=float(np.radians(args.phi0)),
    )
    mod = ModulationSpec(
        ModulationKind(args.kind), args.index, args.fm, float(np.radians(args.phim))
    )
    io.write_waveform_csv(args.out, synthesize(spec, mod))
    print(f"wrote {spec.n_samples} samples to {args.out}")
    return 0


def _cmd_estimate(args: argparse.Namespace) -> int:
    x = io.read_waveform_csv(args.infile, fs=args.fs)
    f0 = args.f0 if args.f0 is not None else x.meta.get("f0_hz", 60.0)
    window = WindowSpec.from_rates(
        args.h, x.fs, float(f0), TimestampConvention(args.timestamp)
    )
    aa = design_antialias(args.fps, x.fs) if args.antialias else None
    stream = estimate_phasors(
        x, window, ReportingSpec(args.fps, antialias=aa, offset=args.offset)
    )
    io.write_phasor_csv(args.out, stream)
    print(f"wrote {len(stream)} frames to {args.out}")
    return 0


def _cmd_response(args: argparse.Namespace) -> int:
    h_list = [int(tok) for tok in args.h.split(",") if tok.strip()]
    count = int(round((args.fmax - args.fmin) / args.step)) + 1
    grid = args.fmin + args.step * np.arange(count)
    ratio = args.fs / args.f0
    if abs(ratio - round(ratio)) > 1e-9:
        raise ValueError(f"fs/f0 must be an integer, got {ratio}")
    rows = response_curve(h_list, args.fs, int(round(ratio)), grid)
    io.write_response_csv(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    stream = io.read_phasor_csv(args.infile)
    record = analyze_stream(stream, Channel(args.channel), fm=args.fm)
    io.write_analysis_csv(args.out, [record])
    flag = "recoverable" if record.recoverable else "unrecoverable"
    print(f"wrote report to {args.out} ({flag}, fm={record.fm_hz:.6g} Hz)")
    return 0


def _cmd_recover(args: argparse.Namespace) -> int:
    channel = Channel(args.channel)
    a_meas = float(np.radians(args.a_meas)) if channel is Channel.ANGLE else args.a_meas
    window = WindowSpec.from_rates(args.h, args.fs, args.f0)
    est = OscillationEstimate(
        channel=channel,
        fm_est=args.fm,
        a_meas=a_meas,
        phi_meas=float(np.radians(args.phi_meas)),
        dc_offset=0.0,
        residual_rms=0.0,
    )
    rec = recover(est, window, args.fs)
    a_rec = np.degrees(rec.a_rec) if channel is Channel.ANGLE else rec.a_rec
    print(f"a_rec={a_rec:.10g}")
    print(f"phi_rec_deg={np.degrees(rec.phi_rec):.10g}")
    print(f"gain={rec.gain_used.g:.10g}")
    print(f"theta_deg={rec.gain_used.theta_deg:.10g}")
    print(f"classification={rec.gain_used.classification.value}")
    return 0


def _cmd_reproduce(args: argparse.Namespace) -> int:
    cells, all_ok = reproduce_table1(antialias=args.antialias)
    unit = {"magnitude": "RMS p.u.", "angle": "deg"}
    print("validation table: oscillation amplitude and phase at fm=20 Hz")
    print("(columns marked * use 240 fps; all others 60 fps)\n")
    for kind in ("magnitude", "angle"):
        rows = [c for c in cells if c.kind == kind]
        heads = [f"h={c.h}" + ("*" if c.fps == 240.0 else "") for c in rows]
        print(f"[{kind} modulation, amplitude in {unit[kind]}, phase in deg]")
        print(f"{'':14s}" + "".join(f"{head:>12s}" for head in heads))
        for label, attr, ref_attr, flag in (
            ("A_theory", "a_theory", "a_theory_ref", "a_theory_ok"),
            ("A_meas", "a_meas", "a_meas_ref", "a_meas_ok"),
            ("theta_theory", "theta_theory_deg", "theta_theory_ref_deg", "theta_theory_ok"),
            ("theta_meas", "theta_meas_deg", "theta_meas_ref_deg", "theta_meas_ok"),
        ):
            print(
                f"{label:14s}"
                + "".join(f"{getattr(c, attr):12.6f}" for c in rows)
            )
            print(
                f"{'  reference':14s}"
                + "".join(f"{getattr(c, ref_attr):12.6f}" for c in rows)
            )
            print(
                f"{'  flag':14s}"
                + "".join(f"{'pass' if getattr(c, flag) else 'FAIL':>12s}" for c in rows)
            )
        print()
    if args.out:
        _write_table1_csv(args.out, cells)
        print(f"wrote {len(cells)} rows to {args.out}")
    print("overall:", "pass" if all_ok else "FAIL")
    return 0 if all_ok else 1


def _write_table1_csv(path: str, cells) -> None:
    lines = [
        "kind,h,fps,a_theory,theta_theory_deg,a_meas,theta_meas_deg,"
        "a_theory_ref,theta_theory_ref_deg,a_meas_ref,theta_meas_ref_deg,"
        "a_theory_ok,theta_theory_ok,a_meas_ok,theta_meas_ok"
    ]
    for c in cells:
        lines.append(
            f"{c.kind},{c.h},{c.fps:g},{c.a_theory:.10e},{c.theta_theory_deg:.10e},"
            f"{c.a_meas:.10e},{c.theta_meas_deg:.10e},{c.a_theory_ref:.10e},"
            f"{c.theta_theory_ref_deg:.10e},{c.a_meas_ref:.10e},{c.theta_meas_ref_deg:.10e},"
            f"{str(c.a_theory_ok).lower()},{str(c.theta_theory_ok).lower()},"
            f"{str(c.a_meas_ok).lower()},{str(c.theta_meas_ok).lower()}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


_COMMANDS = {
    "synth": _cmd_synth,
    "estimate": _cmd_estimate,
    "response": _cmd_response,
    "analyze": _cmd_analyze,
    "recover": _cmd_recover,
    "reproduce": _cmd_reproduce,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
