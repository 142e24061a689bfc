#!/usr/bin/env python3
"""Measure a distorted oscillation and invert the window gain.

An 8-cycle window attenuates a 20 Hz magnitude oscillation by a factor of
about 9.7 and shifts its phase by 116 degrees: a monitoring system that
ignores this underestimates severity badly.  Because the gain is known in
closed form, the distortion inverts exactly:

    a_rec  = sqrt(2) * a_meas / G
    phi_rec = phi_meas - theta

This demo runs the full chain and compares against the ground truth, then
shows the failure mode at a comb null where no recovery exists.

Usage:
    python demos/03_distortion_and_recovery.py
"""

import numpy as np

import pmulab


def main() -> None:
    truth_index, truth_phim = 0.01, np.radians(25.0)
    wave = pmulab.WaveformSpec()
    mod = pmulab.ModulationSpec.magnitude(truth_index, fm=20.0, phim=truth_phim)
    x = pmulab.synthesize(wave, mod)

    print("ground truth: 20 Hz magnitude oscillation, index 0.01, phase 25 deg\n")
    print(f"{'h':>3s} {'a_meas':>10s} {'phi_meas':>9s} {'G':>8s} {'a_rec':>10s} {'phi_rec':>9s}")
    for h in (1, 2, 4, 8):
        window = pmulab.WindowSpec.from_rates(h, wave.fs, wave.f0)
        stream = pmulab.estimate_phasors(x, window, pmulab.ReportingSpec(fps=240.0))
        est = pmulab.fit_sinusoid(stream, pmulab.Channel.MAGNITUDE, fm=20.0)
        rec = pmulab.recover(est, window, fs=wave.fs)
        print(
            f"{h:3d} {est.a_meas:10.6f} {np.degrees(est.phi_meas):8.2f}d "
            f"{rec.gain_used.g:8.4f} {rec.a_rec:10.6f} {np.degrees(rec.phi_rec):8.2f}d"
        )
    print("\nevery window reports a different (attenuated, shifted) oscillation,")
    print("and every recovery lands back on index 0.01 at 25 deg")

    print("\n== the comb-null blind spot ==")
    mod15 = pmulab.ModulationSpec.magnitude(truth_index, fm=15.0)
    x15 = pmulab.synthesize(wave, mod15)
    for h in (2, 4):
        window = pmulab.WindowSpec.from_rates(h, wave.fs, wave.f0)
        stream = pmulab.estimate_phasors(x15, window, pmulab.ReportingSpec(fps=240.0))
        est = pmulab.fit_sinusoid(stream, pmulab.Channel.MAGNITUDE, fm=15.0)
        print(f"h={h}: fitted 15 Hz amplitude = {est.a_meas:.2e}")
        try:
            pmulab.recover(est, window, fs=wave.fs)
            print("      recovery succeeded")
        except pmulab.RecoveryError as exc:
            print(f"      recovery refused: {exc}")
    print("\na silent phasor stream does not prove a quiet grid: at a comb null")
    print("the oscillation is invisible and unrecoverable; prefer short windows")


if __name__ == "__main__":
    main()
