"""Oscillation extraction from phasor streams and window-distortion inversion.

A detected oscillation in the stream's magnitude or (unwrapped) angle series
is characterized by a three-parameter least-squares fit against
``{sin(2*pi*fm*t), cos(2*pi*fm*t), 1}``.  Because the window gain is known
in closed form, the fitted amplitude and phase can then be mapped back to
the true modulation:

    a_rec  = sqrt(2) * a_meas / G
    phi_rec = phi_meas - theta

valid wherever the oscillation frequency does not sit on a comb null.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimator import PhasorStream, WindowSpec
from .response import Channel, ComplexGain, GainClass, h1, wrap_angle

__all__ = [
    "NoOscillationError",
    "RecoveryError",
    "OscillationEstimate",
    "RecoveredOscillation",
    "AnalysisRecord",
    "channel_signal",
    "estimate_fm",
    "fit_sinusoid",
    "recover",
    "analyze_stream",
]

#: Smallest usable gain magnitude for recovery; below this the inversion
#: amplifies measurement error beyond usefulness.
DEFAULT_GAIN_FLOOR = 1e-3

#: Keep the edge-trimmed fit only when at least this many frames survive.
MIN_FIT_FRAMES = 8


class NoOscillationError(ValueError):
    """The channel signal carries no detectable oscillation."""


class RecoveryError(ValueError):
    """The window gain cannot be inverted at the estimated frequency."""


@dataclass(frozen=True)
class OscillationEstimate:
    """Least-squares sinusoid fit of one stream channel.

    ``a_meas`` is in the channel's units (RMS per-unit for magnitude,
    radians for angle); ``phi_meas`` is the sine-convention phase in
    (-pi, pi].
    """

    channel: Channel
    fm_est: float
    a_meas: float
    phi_meas: float
    dc_offset: float
    residual_rms: float


@dataclass(frozen=True)
class RecoveredOscillation:
    """Oscillation parameters after inverting the window gain."""

    a_rec: float
    phi_rec: float
    gain_used: ComplexGain


def channel_signal(stream: PhasorStream, channel: Channel) -> np.ndarray:
    """Scalar series of the stream: magnitude, or unwrapped angle."""
    if channel is Channel.MAGNITUDE:
        return stream.magnitude
    return np.unwrap(np.angle(stream.values))


def _edge_trim(stream: PhasorStream) -> np.ndarray:
    """Boolean mask dropping one window length of frames at each end.

    Streams computed from finite records carry filter and windowing edge
    effects there.  Falls back to the full stream when trimming would leave
    too few frames.
    """
    m = stream.frame_indices
    L = stream.window.length
    keep = (m >= m[0] + L) & (m <= m[-1] - L)
    if keep.sum() < MIN_FIT_FRAMES:
        return np.ones(m.size, dtype=bool)
    return keep


def estimate_fm(
    stream: PhasorStream, channel: Channel, pad_factor: int = 4
) -> float:
    """Estimate the dominant oscillation frequency of a stream channel.

    Takes the magnitude-spectrum peak of the mean-removed channel signal on
    a ``pad_factor``-times zero-padded FFT grid and refines it by quadratic
    interpolation over the three bins around the peak.  On a clean sinusoid
    the absolute error is below fps/(4*n_frames).

    Raises:
        NoOscillationError: flat channel signal.
        ValueError: the record covers fewer than two periods of the
            detected oscillation.
    """
    s = channel_signal(stream, channel)
    n = s.size
    if n < 8:
        raise ValueError(f"need at least 8 frames, got {n}")
    dc = float(np.mean(s))
    s0 = s - dc
    if np.sqrt(np.mean(s0**2)) < 1e-9 * max(abs(dc), 1.0):
        raise NoOscillationError("no oscillation detected")

    nfft = int(pad_factor) * n
    spec = np.abs(np.fft.rfft(s0, nfft))
    k = int(np.argmax(spec[1:])) + 1
    delta = 0.0
    if 1 <= k < spec.size - 1:
        a, b, c = spec[k - 1], spec[k], spec[k + 1]
        denom = a - 2.0 * b + c
        if denom != 0.0:
            delta = float(np.clip(0.5 * (a - c) / denom, -0.5, 0.5))
    fm = (k + delta) * stream.fps / nfft

    if fm * n / stream.fps < 2.0:
        raise ValueError(
            f"record covers fewer than two periods of the detected {fm:.3g} Hz "
            "oscillation; pass the frequency explicitly"
        )
    return float(fm)


def fit_sinusoid(
    stream: PhasorStream,
    channel: Channel,
    fm: float,
    exclude_edges: bool = True,
) -> OscillationEstimate:
    """Three-parameter least-squares sinusoid fit at a known frequency.

    Solves ``s ~ a*sin(2*pi*fm*t) + b*cos(2*pi*fm*t) + c`` over the frame
    timestamps and reports ``a_meas = hypot(a, b)``,
    ``phi_meas = atan2(b, a)``, so the channel is modeled as
    ``a_meas*sin(2*pi*fm*t + phi_meas) + c``.  The angle channel is
    unwrapped before fitting, which makes the fit invariant to any constant
    2*pi offset.

    Raises:
        ValueError: fm <= 0, or the basis is rank deficient (fm aliases to
            zero at the stream's reporting rate).
    """
    if fm <= 0:
        raise ValueError(f"fm must be > 0, got {fm}")
    s = channel_signal(stream, channel)
    keep = _edge_trim(stream) if exclude_edges else np.ones(s.size, dtype=bool)
    s = s[keep]
    t = stream.timestamps[keep]
    if s.size < 3:
        raise ValueError(f"need at least 3 frames to fit, got {s.size}")

    arg = 2.0 * np.pi * fm * t
    basis = np.column_stack([np.sin(arg), np.cos(arg), np.ones_like(arg)])
    coef, _, rank, sv = np.linalg.lstsq(basis, s, rcond=None)
    if rank < 3 or sv[-1] <= 1e-10 * sv[0]:
        raise ValueError(
            f"rank-deficient sinusoid basis at fm={fm} Hz: the frequency is "
            f"zero or aliases to zero at {stream.fps} fps"
        )
    a, b, c = (float(v) for v in coef)
    residual = s - basis @ coef
    return OscillationEstimate(
        channel=channel,
        fm_est=float(fm),
        a_meas=float(np.hypot(a, b)),
        phi_meas=wrap_angle(np.arctan2(b, a)),
        dc_offset=c,
        residual_rms=float(np.sqrt(np.mean(residual**2))),
    )


def recover(
    est: OscillationEstimate,
    window: WindowSpec,
    fs: float,
    gain_floor: float = DEFAULT_GAIN_FLOOR,
) -> RecoveredOscillation:
    """Invert the window distortion of a fitted oscillation.

    Raises:
        RecoveryError: the estimated frequency sits on a comb null, or the
            gain magnitude is below ``gain_floor``.
    """
    cg = h1(2.0 * np.pi * est.fm_est / fs, window.length)
    if cg.classification is GainClass.NULL:
        raise RecoveryError("unrecoverable: oscillation at comb-null frequency")
    if cg.g < gain_floor:
        raise RecoveryError(
            f"ill-conditioned recovery: gain {cg.g:.3e} below floor {gain_floor:.3e} "
            f"at fm={est.fm_est} Hz"
        )
    return RecoveredOscillation(
        a_rec=float(np.sqrt(2.0) * est.a_meas / cg.g),
        phi_rec=wrap_angle(est.phi_meas - cg.theta),
        gain_used=cg,
    )


@dataclass(frozen=True)
class AnalysisRecord:
    """One row of an analysis report: fit plus (attempted) recovery."""

    channel: Channel
    fm_hz: float
    a_meas: float
    phi_meas: float
    residual_rms: float
    gain: ComplexGain
    a_rec: float | None
    phi_rec: float | None
    recoverable: bool


def analyze_stream(
    stream: PhasorStream,
    channel: Channel,
    fm: float | None = None,
    gain_floor: float = DEFAULT_GAIN_FLOOR,
    exclude_edges: bool = True,
) -> AnalysisRecord:
    """Fit one stream channel and attempt recovery in a single step.

    When ``fm`` is omitted it is estimated from the spectrum first.
    Recovery failure (comb null or gain floor) is reported through the
    ``recoverable`` flag rather than raised.
    """
    if fm is None:
        fm = estimate_fm(stream, channel)
    est = fit_sinusoid(stream, channel, fm, exclude_edges=exclude_edges)
    fs = stream.fps * stream.metadata.get("decimation", 1)
    fs = float(stream.metadata.get("fs_hz", fs))
    try:
        rec = recover(est, stream.window, fs, gain_floor=gain_floor)
        return AnalysisRecord(
            channel=channel,
            fm_hz=est.fm_est,
            a_meas=est.a_meas,
            phi_meas=est.phi_meas,
            residual_rms=est.residual_rms,
            gain=rec.gain_used,
            a_rec=rec.a_rec,
            phi_rec=rec.phi_rec,
            recoverable=True,
        )
    except RecoveryError:
        cg = h1(2.0 * np.pi * est.fm_est / fs, stream.window.length)
        return AnalysisRecord(
            channel=channel,
            fm_hz=est.fm_est,
            a_meas=est.a_meas,
            phi_meas=est.phi_meas,
            residual_rms=est.residual_rms,
            gain=cg,
            a_rec=None,
            phi_rec=None,
            recoverable=False,
        )
