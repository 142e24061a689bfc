#!/usr/bin/env python3
"""Reporting-rate aliasing of the demodulation images, and two cures.

Demodulation plants image components at -(2*f0 -+ fm).  With f0 = 60 Hz
and fm = 20 Hz they sit at -100 and -140 Hz; decimating to 60 fps folds
both exactly onto +-20 Hz, biasing the measured oscillation.  Reporting at
240 fps keeps them clear of fm, and a low-pass filter before decimation
removes them entirely even at 60 fps.

Usage:
    python demos/04_reporting_rate_and_aliasing.py
"""

import numpy as np

import pmulab


def measure(x, h, fps, antialias=False):
    window = pmulab.WindowSpec(h)
    aa = pmulab.design_antialias(fps, 960.0) if antialias else None
    stream = pmulab.estimate_phasors(
        x, window, pmulab.ReportingSpec(fps, antialias=aa)
    )
    est = pmulab.fit_sinusoid(stream, pmulab.Channel.MAGNITUDE, fm=20.0)
    return est.a_meas, np.degrees(est.phi_meas) % 360.0


def main() -> None:
    wave = pmulab.WaveformSpec()
    mod = pmulab.ModulationSpec.magnitude(0.01, fm=20.0)
    x = pmulab.synthesize(wave, mod)

    print("image frequencies for fm=20 Hz: -100 and -140 Hz")
    print("aliased at 60 fps: -100 -> +20, -140 -> -20 (right on the oscillation)")
    print("aliased at 240 fps: -100 -> -100, -140 -> +100 (harmless)\n")

    print(f"{'h':>3s} {'prediction':>22s} {'60 fps':>22s} {'240 fps':>22s} {'60 fps filtered':>22s}")
    for h in (1, 2, 4, 8):
        pred = pmulab.predict_oscillation(wave, mod, pmulab.WindowSpec(h))
        cells = [f"{pred.amplitude:.6f} @ {np.degrees(pred.phase) % 360:6.2f}d"]
        for fps, aa in ((60.0, False), (240.0, False), (60.0, True)):
            a, th = measure(x, h, fps, antialias=aa)
            cells.append(f"{a:.6f} @ {th:6.2f}d")
        print(f"{h:3d} " + " ".join(f"{c:>22s}" for c in cells))

    print("\nthe 60 fps column is biased a few tenths of a degree and half a")
    print("percent by the folded images; both 240 fps and the anti-alias")
    print("filter collapse the measurement onto the closed-form prediction")

    f = pmulab.design_antialias(60.0, 960.0)
    print(f"\nanti-alias filter: {f.taps.size} taps, cutoff {f.cutoff_hz:g} Hz, "
          f"group delay {f.group_delay} samples (compensated internally)")


if __name__ == "__main__":
    main()
