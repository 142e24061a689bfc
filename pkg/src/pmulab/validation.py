"""End-to-end reproduction of the reference validation table.

The reference scenario is a 60 Hz, 1 p.u. carrier sampled at 960 Hz with a
20 Hz oscillation (magnitude index 0.01, phase index 0.02 rad), estimated
with windows of 1, 2, 4 and 8 cycles.  For each window the table lists the
closed-form oscillation amplitude and phase next to the values measured from
a simulated pipeline at 60 fps, plus an 8-cycle column at 240 fps where the
demodulation images no longer alias onto the oscillation frequency.

``reproduce_table1`` recomputes every cell and flags it against the
reference at the documented tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import fit_sinusoid
from .estimator import ReportingSpec, WindowSpec, design_antialias, estimate_phasors
from .response import Channel, predict_oscillation, wrap_angle
from .signal import ModulationKind, ModulationSpec, WaveformSpec, synthesize

__all__ = [
    "TABLE1_SETUP",
    "REFERENCE_TABLE1",
    "Table1Cell",
    "measure_oscillation",
    "reproduce_table1",
]

#: Scenario behind the validation table.
TABLE1_SETUP = {
    "v_rms": 1.0,
    "f0_hz": 60.0,
    "fs_hz": 960.0,
    "fm_hz": 20.0,
    "alpha": 0.01,
    "beta_rad": 0.02,
    "duration_s": 4.0,
    "phi0_rad": 0.0,
    "phim_rad": 0.0,
}

#: Reference values, one column per (h, fps).  Magnitude-channel amplitudes
#: are RMS per-unit; angle-channel amplitudes and all phases are degrees.
REFERENCE_TABLE1 = {
    "magnitude": {
        (1, 60.0): {"a_theory": 0.008276, "theta_theory": 56.25, "a_meas": 0.008045, "theta_meas": 52.09},
        (2, 60.0): {"a_theory": 0.004138, "theta_theory": 116.25, "a_meas": 0.004016, "theta_meas": 112.45},
        (4, 60.0): {"a_theory": 0.002069, "theta_theory": 56.25, "a_meas": 0.002011, "theta_meas": 52.10},
        (8, 60.0): {"a_theory": 0.001034, "theta_theory": 116.25, "a_meas": 0.001004, "theta_meas": 112.45},
        (8, 240.0): {"a_theory": 0.001034, "theta_theory": 116.25, "a_meas": 0.001034, "theta_meas": 116.26},
    },
    "angle": {
        (1, 60.0): {"a_theory": 0.9483, "theta_theory": 56.25, "a_meas": 0.9673, "theta_meas": 59.82},
        (2, 60.0): {"a_theory": 0.4742, "theta_theory": 116.25, "a_meas": 0.4846, "theta_meas": 120.18},
        (4, 60.0): {"a_theory": 0.2371, "theta_theory": 56.25, "a_meas": 0.2421, "theta_meas": 59.82},
        (8, 60.0): {"a_theory": 0.1185, "theta_theory": 116.25, "a_meas": 0.1211, "theta_meas": 120.18},
        (8, 240.0): {"a_theory": 0.1185, "theta_theory": 116.25, "a_meas": 0.1185, "theta_meas": 116.27},
    },
}

# Tolerances for the pass flags.  Theory cells are absolute (the reference
# prints four significant figures); measured cells are relative for the
# amplitude and absolute degrees for the phase.  The 60 fps phase budget is
# wide because the aliased image contribution depends on the initial phases
# and decimation offset of the simulation, which the reference leaves
# unstated.
TOL_A_THEORY_MAG = 5e-7
TOL_A_THEORY_ANGLE_DEG = 5e-4
TOL_THETA_THEORY_DEG = 5e-3
TOL_A_MEAS_240 = 2e-3
TOL_THETA_MEAS_240_DEG = 0.05
TOL_A_MEAS_60 = 1e-2
TOL_THETA_MEAS_60_DEG = 1.5


@dataclass(frozen=True)
class Table1Cell:
    kind: str
    h: int
    fps: float
    a_theory: float
    theta_theory_deg: float
    a_meas: float
    theta_meas_deg: float
    a_theory_ref: float
    theta_theory_ref_deg: float
    a_meas_ref: float
    theta_meas_ref_deg: float
    a_theory_ok: bool
    theta_theory_ok: bool
    a_meas_ok: bool
    theta_meas_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.a_theory_ok
            and self.theta_theory_ok
            and self.a_meas_ok
            and self.theta_meas_ok
        )


def _scenario(kind: ModulationKind) -> tuple[WaveformSpec, ModulationSpec]:
    s = TABLE1_SETUP
    w = WaveformSpec.with_duration(
        s["duration_s"], v_rms=s["v_rms"], f0=s["f0_hz"], fs=s["fs_hz"], phi0=s["phi0_rad"]
    )
    index = s["alpha"] if kind is ModulationKind.MAGNITUDE else s["beta_rad"]
    m = ModulationSpec(kind, index, s["fm_hz"], s["phim_rad"])
    return w, m


def measure_oscillation(
    kind: ModulationKind,
    h: int,
    fps: float,
    antialias: bool = False,
    decimation_offset: int = 0,
) -> tuple[float, float]:
    """Amplitude and phase (deg, mod 360) measured by the full pipeline."""
    w, m = _scenario(kind)
    window = WindowSpec.from_rates(h, w.fs, w.f0)
    aa = design_antialias(fps, w.fs) if antialias else None
    stream = estimate_phasors(
        synthesize(w, m), window, ReportingSpec(fps, antialias=aa, offset=decimation_offset)
    )
    channel = Channel.MAGNITUDE if kind is ModulationKind.MAGNITUDE else Channel.ANGLE
    est = fit_sinusoid(stream, channel, m.fm)
    return est.a_meas, float(np.degrees(est.phi_meas) % 360.0)


def _theta_err_deg(measured: float, reference: float) -> float:
    return abs(np.degrees(wrap_angle(np.radians(measured - reference))))


def reproduce_table1(antialias: bool = False) -> tuple[list[Table1Cell], bool]:
    """Recompute the validation table and flag every cell.

    ``antialias`` applies the decimation low-pass in the 60 fps pipelines,
    which suppresses the image aliasing and pulls the measured columns onto
    the theory values (the measured-value flags still compare against the
    unfiltered reference).
    """
    cells = []
    for kind_name, kind, channel in (
        ("magnitude", ModulationKind.MAGNITUDE, Channel.MAGNITUDE),
        ("angle", ModulationKind.PHASE, Channel.ANGLE),
    ):
        w, m = _scenario(kind)
        for (h, fps), ref in REFERENCE_TABLE1[kind_name].items():
            pred = predict_oscillation(w, m, WindowSpec.from_rates(h, w.fs, w.f0))
            a_th = pred.amplitude
            th_th = float(np.degrees(pred.phase) % 360.0)
            a_ms, th_ms = measure_oscillation(
                kind, h, fps, antialias=antialias and fps == 60.0
            )
            if channel is Channel.ANGLE:
                a_th = float(np.degrees(a_th))
                a_ms = float(np.degrees(a_ms))
                tol_a_theory = TOL_A_THEORY_ANGLE_DEG
            else:
                tol_a_theory = TOL_A_THEORY_MAG
            if fps == 240.0:
                tol_a_meas, tol_th_meas = TOL_A_MEAS_240, TOL_THETA_MEAS_240_DEG
            else:
                tol_a_meas, tol_th_meas = TOL_A_MEAS_60, TOL_THETA_MEAS_60_DEG
            cells.append(
                Table1Cell(
                    kind=kind_name,
                    h=h,
                    fps=fps,
                    a_theory=a_th,
                    theta_theory_deg=th_th,
                    a_meas=a_ms,
                    theta_meas_deg=th_ms,
                    a_theory_ref=ref["a_theory"],
                    theta_theory_ref_deg=ref["theta_theory"],
                    a_meas_ref=ref["a_meas"],
                    theta_meas_ref_deg=ref["theta_meas"],
                    a_theory_ok=abs(a_th - ref["a_theory"]) <= tol_a_theory,
                    theta_theory_ok=_theta_err_deg(th_th, ref["theta_theory"])
                    <= TOL_THETA_THEORY_DEG,
                    a_meas_ok=abs(a_ms / ref["a_meas"] - 1.0) <= tol_a_meas,
                    theta_meas_ok=_theta_err_deg(th_ms, ref["theta_meas"]) <= tol_th_meas,
                )
            )
    return cells, all(c.all_ok for c in cells)
