"""Estimator: demodulation, window averaging, decimation, anti-alias filter."""

import numpy as np
import pytest

from pmulab import (
    Channel,
    FilterDesignError,
    FilterSpec,
    ModulationSpec,
    ReportingSpec,
    TimestampConvention,
    Waveform,
    WaveformSpec,
    WindowSpec,
    demodulate,
    design_antialias,
    estimate_phasor_at,
    estimate_phasors,
    fit_sinusoid,
    synthesize,
    wrap_angle,
)

SQ2 = np.sqrt(2.0)


def _carrier(phi0=0.0, n=3840, v_rms=1.0):
    return synthesize(WaveformSpec(v_rms=v_rms, phi0=phi0, n_samples=n))


# ── demodulation ─────────────────────────────────────────────────────────────


def test_demodulated_first_sample():
    y = demodulate(_carrier(), WindowSpec(1))
    assert y[0] == pytest.approx(SQ2 + 0.0j, abs=1e-15)


def test_demodulated_cycle_average_of_carrier():
    y = demodulate(_carrier(), WindowSpec(1))
    assert np.mean(y[:16]) == pytest.approx(SQ2 / 2.0 + 0.0j, abs=1e-14)


def test_demodulate_matches_elementwise_oracle():
    rng = np.random.default_rng(42)
    samples = rng.normal(size=16)
    x = Waveform(samples=samples, fs=960.0)
    y = demodulate(x, WindowSpec(1, 16))
    oracle = samples * np.exp(-1j * 2.0 * np.pi * np.arange(16) / 16.0)
    assert np.max(np.abs(y - oracle)) < 1e-15


def test_demodulate_respects_start_index():
    rng = np.random.default_rng(5)
    samples = rng.normal(size=32)
    shifted = Waveform(samples=samples, fs=960.0, start_index=7)
    y = demodulate(shifted, WindowSpec(1, 16))
    oracle = samples * np.exp(-1j * 2.0 * np.pi * (7 + np.arange(32)) / 16.0)
    assert np.max(np.abs(y - oracle)) < 1e-14


# ── window averaging ─────────────────────────────────────────────────────────


@pytest.mark.parametrize("h", [1, 2, 4, 8])
def test_pure_carrier_maps_to_unit_phasor(h):
    stream = estimate_phasors(_carrier(), WindowSpec(h))
    assert np.max(np.abs(stream.values - 1.0)) < 1e-12


def test_pure_carrier_phase_passes_through():
    stream = estimate_phasors(_carrier(phi0=np.pi / 6.0), WindowSpec(2))
    assert np.max(np.abs(stream.values - np.exp(1j * np.pi / 6.0))) < 1e-12


def test_stream_matches_single_expression_dft():
    # Equivalence of the one-expression bin DFT and demodulate-then-average.
    rng = np.random.default_rng(9)
    x = Waveform(samples=rng.normal(size=400), fs=960.0)
    w = WindowSpec(3)
    stream = estimate_phasors(x, w, ReportingSpec(fps=60.0))
    for i in range(len(stream)):
        direct = estimate_phasor_at(x, w, int(stream.frame_indices[i]))
        assert abs(stream.values[i] - direct) < 1e-12


def test_stream_matches_naive_window_sums():
    rng = np.random.default_rng(10)
    x = Waveform(samples=rng.normal(size=300), fs=960.0)
    w = WindowSpec(2)
    stream = estimate_phasors(x, w)
    y = demodulate(x, w)
    L = w.length
    for i in range(0, len(stream), 17):
        m = int(stream.frame_indices[i])
        naive = SQ2 / L * sum(y[m + n] for n in range(L))
        assert abs(stream.values[i] - naive) < 1e-12


def test_frame_grid_and_timestamps_left_edge():
    x = _carrier(n=3840)
    stream = estimate_phasors(x, WindowSpec(1), ReportingSpec(fps=60.0))
    assert stream.frame_indices[0] == 0
    assert np.all(np.diff(stream.frame_indices) == 16)
    assert stream.timestamps[1] == pytest.approx(16.0 / 960.0)
    # last window must fit: m + L <= n
    assert stream.frame_indices[-1] + 16 <= 3840


def test_center_timestamps_shifted_by_half_window():
    x = _carrier()
    left = estimate_phasors(x, WindowSpec(4), ReportingSpec(fps=60.0))
    center = estimate_phasors(
        x,
        WindowSpec(4, timestamp_convention=TimestampConvention.CENTER),
        ReportingSpec(fps=60.0),
    )
    assert np.array_equal(left.values, center.values)
    shift = (64 - 1) / 2.0 / 960.0
    assert np.allclose(center.timestamps - left.timestamps, shift, atol=1e-15)


def test_decimation_offset_selects_phase():
    x = _carrier()
    stream = estimate_phasors(x, WindowSpec(1), ReportingSpec(fps=60.0, offset=5))
    assert stream.frame_indices[0] == 5
    assert np.all(stream.frame_indices % 16 == 5)


def test_signal_shorter_than_window_rejected():
    with pytest.raises(ValueError, match="shorter than one window"):
        estimate_phasors(_carrier(n=100), WindowSpec(8))


def test_non_integer_decimation_rejected():
    with pytest.raises(ValueError, match="fs/fps"):
        estimate_phasors(_carrier(), WindowSpec(1), ReportingSpec(fps=70.0))


def test_offset_must_be_below_decimation_factor():
    with pytest.raises(ValueError, match="offset"):
        estimate_phasors(_carrier(), WindowSpec(1), ReportingSpec(fps=60.0, offset=16))


def test_oscillation_phase_depends_on_timestamp_convention():
    # A modulated stream fitted against center timestamps reads a phase
    # lower by Wm*(L-1)/2 than against left-edge timestamps.
    w = WaveformSpec()
    m = ModulationSpec.magnitude(0.01, fm=20.0)
    x = synthesize(w, m)
    om = 2.0 * np.pi * 20.0 / 960.0
    left = estimate_phasors(x, WindowSpec(4), ReportingSpec(fps=240.0))
    center = estimate_phasors(
        x,
        WindowSpec(4, timestamp_convention=TimestampConvention.CENTER),
        ReportingSpec(fps=240.0),
    )
    phi_left = fit_sinusoid(left, Channel.MAGNITUDE, 20.0).phi_meas
    phi_center = fit_sinusoid(center, Channel.MAGNITUDE, 20.0).phi_meas
    expected = om * (64 - 1) / 2.0
    assert wrap_angle(phi_left - phi_center - expected) == pytest.approx(0.0, abs=1e-6)


# ── anti-alias filter ────────────────────────────────────────────────────────


def test_identity_filter_when_rates_match():
    f = design_antialias(960.0, 960.0)
    assert f.taps.size == 1
    assert f.taps[0] == 1.0
    assert f.group_delay == 0


def test_antialias_meets_template():
    f = design_antialias(60.0, 960.0)
    # independent response oracle: direct evaluation of the tap sum
    def mag(freq):
        n = np.arange(f.taps.size)
        return abs(np.sum(f.taps * np.exp(-2j * np.pi * freq / 960.0 * n)))

    for freq in np.linspace(0.0, 24.0, 49):
        assert abs(mag(freq) - 1.0) < 1e-3, f"passband deviation at {freq} Hz"
    for freq in np.linspace(30.0, 480.0, 91):
        assert mag(freq) < 1e-3, f"stopband leak at {freq} Hz"


def test_antialias_dc_invariance():
    f = design_antialias(60.0, 960.0)
    dc = np.full(3000, 0.7)
    steady = np.convolve(dc, f.taps, mode="valid")
    assert np.max(np.abs(steady - 0.7)) < 1e-12


def test_filtered_carrier_still_maps_to_unit_phasor():
    f = design_antialias(60.0, 960.0)
    stream = estimate_phasors(
        _carrier(), WindowSpec(1), ReportingSpec(fps=60.0, antialias=f)
    )
    assert np.max(np.abs(stream.values - 1.0)) < 1e-12


def test_antialias_excludes_filter_transient():
    f = design_antialias(60.0, 960.0)
    stream = estimate_phasors(_carrier(), WindowSpec(1), ReportingSpec(60.0, antialias=f))
    assert stream.frame_indices[0] >= f.group_delay
    assert stream.frame_indices[-1] + 16 - 1 <= 3840 - 1 - f.group_delay


def test_antialias_restores_theory_at_60fps():
    # With the images filtered out, the 60 fps measurement collapses onto
    # the closed-form prediction.
    w = WaveformSpec()
    m = ModulationSpec.magnitude(0.01, fm=20.0)
    f = design_antialias(60.0, 960.0)
    stream = estimate_phasors(
        synthesize(w, m), WindowSpec(8), ReportingSpec(60.0, antialias=f)
    )
    est = fit_sinusoid(stream, Channel.MAGNITUDE, 20.0)
    assert est.a_meas == pytest.approx(0.001034, rel=2e-3)
    assert np.degrees(est.phi_meas) % 360.0 == pytest.approx(116.25, abs=0.05)


def test_decimated_fit_equals_undecimated_fit_with_antialias():
    w = WaveformSpec()
    m = ModulationSpec.magnitude(0.01, fm=22.0)
    x = synthesize(w, m)
    f = design_antialias(60.0, 960.0)
    slow = estimate_phasors(x, WindowSpec(4), ReportingSpec(60.0, antialias=f))
    fast = estimate_phasors(x, WindowSpec(4), ReportingSpec(960.0, antialias=f))
    est_slow = fit_sinusoid(slow, Channel.MAGNITUDE, 22.0)
    est_fast = fit_sinusoid(fast, Channel.MAGNITUDE, 22.0)
    assert est_slow.a_meas == pytest.approx(est_fast.a_meas, rel=1e-4)
    assert wrap_angle(est_slow.phi_meas - est_fast.phi_meas) == pytest.approx(
        0.0, abs=1e-4
    )


def test_antialias_requires_integer_decimation():
    with pytest.raises(ValueError):
        design_antialias(70.0, 960.0)


def test_antialias_tap_budget():
    with pytest.raises(FilterDesignError, match="taps"):
        design_antialias(60.0, 960.0, max_taps=101)


def test_filter_spec_validation():
    with pytest.raises(ValueError):
        FilterSpec(taps=np.array([0.5, 0.5]), cutoff_hz=10.0)  # even length
    with pytest.raises(ValueError):
        FilterSpec(taps=np.array([0.2, 0.5, 0.4]), cutoff_hz=10.0)  # asymmetric
    with pytest.raises(ValueError):
        FilterSpec(taps=np.array([0.2, 0.5, 0.2]), cutoff_hz=10.0)  # DC != 1


# ── table reference check ────────────────────────────────────────────────────


def test_magnitude_pipeline_h8_60fps_matches_reference():
    # Aliased images shift the measurement off the closed form; the
    # reference simulation saw 0.001004 at 112.45 deg.
    w = WaveformSpec()
    m = ModulationSpec.magnitude(0.01, fm=20.0)
    stream = estimate_phasors(synthesize(w, m), WindowSpec(8), ReportingSpec(60.0))
    est = fit_sinusoid(stream, Channel.MAGNITUDE, 20.0)
    assert est.a_meas == pytest.approx(0.001004, rel=0.01)
    assert np.degrees(est.phi_meas) % 360.0 == pytest.approx(112.45, abs=1.5)


# ── stream container ─────────────────────────────────────────────────────────


def test_stream_accessors():
    stream = estimate_phasors(_carrier(n=128), WindowSpec(1), ReportingSpec(fps=60.0))
    assert len(stream) == len(stream.frames)
    frame = stream[0]
    assert frame.frame_index == 0
    assert frame.value == pytest.approx(1.0 + 0.0j, abs=1e-12)
    assert np.all(stream.angle > -np.pi)
    assert np.all(stream.angle <= np.pi)


def test_stream_metadata_provenance():
    w = WaveformSpec()
    m = ModulationSpec.phase(0.02, fm=20.0)
    stream = estimate_phasors(synthesize(w, m), WindowSpec(8), ReportingSpec(240.0))
    meta = stream.metadata
    assert meta["fs_hz"] == 960.0
    assert meta["fps"] == 240.0
    assert meta["decimation"] == 4
    assert meta["modulation_kind"] == "phase"
    assert meta["fm_hz"] == 20.0
    assert meta["antialias"] == "off"
