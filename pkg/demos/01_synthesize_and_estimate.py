#!/usr/bin/env python3
"""Synthesize a modulated waveform and estimate its phasor stream.

Walks the first half of the pipeline: build a 60 Hz carrier with a 20 Hz
magnitude oscillation, demodulate it to baseband, average it over DFT
windows of different lengths, and export the waveform and one phasor
stream as CSV.

Usage:
    python demos/01_synthesize_and_estimate.py
"""

from pathlib import Path

import numpy as np

import pmulab

OUT = Path(__file__).parent / "output"


def main() -> None:
    OUT.mkdir(exist_ok=True)

    print("== 1. synthesize ==")
    wave_spec = pmulab.WaveformSpec()  # 1 p.u., 60 Hz carrier, 960 Hz, 4 s
    mod = pmulab.ModulationSpec.magnitude(0.01, fm=20.0)
    x = pmulab.synthesize(wave_spec, mod)
    print(f"samples:        {x.n_samples} at {x.fs:g} Hz")
    print(f"peak value:     {np.max(np.abs(x.samples)):.6f} "
          f"(sqrt(2)*(1+0.01) = {np.sqrt(2) * 1.01:.6f})")

    print("\n== 2. demodulate ==")
    window = pmulab.WindowSpec.from_rates(h=4, fs=wave_spec.fs, f0=wave_spec.f0)
    y = pmulab.demodulate(x, window)
    print(f"y[0] = {y[0]:.6f}  (x[0]*exp(0) = sqrt(2) at phi0=0)")
    print(f"mean of y over one cycle = {np.mean(y[:16]):.6f}  (DC term sqrt(2)/2)")

    print("\n== 3. estimate phasors ==")
    for h in (1, 2, 4, 8):
        w = pmulab.WindowSpec.from_rates(h, wave_spec.fs, wave_spec.f0)
        stream = pmulab.estimate_phasors(x, w, pmulab.ReportingSpec(fps=60.0))
        mag = stream.magnitude
        print(f"h={h}: {len(stream)} frames at 60 fps, |X| swings "
              f"{mag.min():.6f} .. {mag.max():.6f} "
              f"(ripple {0.5 * (mag.max() - mag.min()):.6f})")
    print("longer windows attenuate the 20 Hz ripple: that is the window gain at work")

    print("\n== 4. export ==")
    wave_csv = OUT / "waveform.csv"
    phasor_csv = OUT / "phasors_h4_60fps.csv"
    pmulab.io.write_waveform_csv(wave_csv, x)
    stream = pmulab.estimate_phasors(x, window, pmulab.ReportingSpec(fps=60.0))
    pmulab.io.write_phasor_csv(phasor_csv, stream)
    print(f"wrote {wave_csv}")
    print(f"wrote {phasor_csv} (+ .meta sidecar with the full provenance)")


if __name__ == "__main__":
    main()
