"""Multi-cycle windowed DFT phasor estimation.

The estimator demodulates the input to the synchronous reference frame,
``y[p] = x[p] * exp(-j*w0*p)``, and averages it over a rectangular window of
``L = h*N`` samples (h carrier cycles of N samples each):

    X[m] = (sqrt(2)/L) * sum_{n=0..L-1} y[m+n]

which equals the single-bin DFT of ``x`` at bin k = h scaled so that a pure
carrier of unit RMS maps to the phasor 1+0j.  Frames are produced on every
sample and decimated to a reporting rate, optionally after a linear-phase
FIR anti-alias filter whose group delay is compensated before windowing.

Frame m may be stamped with the time of the window's first sample (left
edge, the native convention of the sum above) or of its midpoint
``(m + (L-1)/2)/fs``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from .signal import Waveform

__all__ = [
    "TimestampConvention",
    "WindowSpec",
    "FilterSpec",
    "FilterDesignError",
    "ReportingSpec",
    "PhasorFrame",
    "PhasorStream",
    "demodulate",
    "estimate_phasor_at",
    "estimate_phasors",
    "design_antialias",
    "filter_response",
]


class TimestampConvention(enum.Enum):
    LEFT_EDGE = "left"
    CENTER = "center"


class FilterDesignError(ValueError):
    """Requested anti-alias specification cannot be met."""


@dataclass(frozen=True)
class WindowSpec:
    """Rectangular DFT window geometry.

    ``h`` is the window length in carrier cycles and doubles as the DFT bin
    index, which pins the analyzed bin frequency to the carrier:
    f_k = k*fs/L = f0.  ``n_per_cycle`` is N = fs/f0.
    """

    h: int
    n_per_cycle: int = 16
    timestamp_convention: TimestampConvention = TimestampConvention.LEFT_EDGE

    def __post_init__(self) -> None:
        if not isinstance(self.h, (int, np.integer)) or self.h < 1:
            raise ValueError(f"h must be a positive integer, got {self.h!r}")
        if not isinstance(self.n_per_cycle, (int, np.integer)) or self.n_per_cycle < 3:
            raise ValueError(
                f"n_per_cycle must be an integer >= 3, got {self.n_per_cycle!r}"
            )

    @classmethod
    def from_rates(
        cls,
        h: int,
        fs: float,
        f0: float,
        timestamp_convention: TimestampConvention = TimestampConvention.LEFT_EDGE,
    ) -> "WindowSpec":
        ratio = fs / f0
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(f"fs/f0 must be an integer, got {ratio}")
        return cls(h, int(round(ratio)), timestamp_convention)

    @property
    def length(self) -> int:
        """Window length L = h*N in samples."""
        return self.h * self.n_per_cycle

    @property
    def bin_index(self) -> int:
        return self.h

    @property
    def omega0(self) -> float:
        """Analyzed bin frequency in rad/sample (the carrier frequency)."""
        return 2.0 * np.pi / self.n_per_cycle


@dataclass(frozen=True, eq=False)
class FilterSpec:
    """Odd-length linear-phase FIR filter with unit DC gain."""

    taps: np.ndarray
    cutoff_hz: float

    def __post_init__(self) -> None:
        taps = np.asarray(self.taps, dtype=np.float64)
        object.__setattr__(self, "taps", taps)
        if taps.ndim != 1 or taps.size % 2 == 0:
            raise ValueError("taps must be a one-dimensional odd-length sequence")
        if not np.allclose(taps, taps[::-1], rtol=0.0, atol=1e-12):
            raise ValueError("taps must be symmetric (linear phase)")
        if abs(taps.sum() - 1.0) > 1e-12:
            raise ValueError(f"DC gain must be 1 within 1e-12, got {taps.sum()!r}")

    @property
    def group_delay(self) -> int:
        """Delay of the symmetric filter in samples, (n_taps - 1)/2."""
        return (self.taps.size - 1) // 2


@dataclass(frozen=True)
class ReportingSpec:
    """Frame rate of the emitted phasor stream.

    ``offset`` selects the decimation phase: frame sample indices satisfy
    ``m % D == offset`` with D = fs/fps.  The default keeps the first frame
    at m = 0.
    """

    fps: float
    antialias: FilterSpec | None = None
    offset: int = 0

    def __post_init__(self) -> None:
        if self.fps <= 0:
            raise ValueError(f"fps must be > 0, got {self.fps}")
        if self.offset < 0:
            raise ValueError(f"offset must be >= 0, got {self.offset}")


@dataclass(frozen=True)
class PhasorFrame:
    frame_index: int
    timestamp_s: float
    value: complex


@dataclass(eq=False)
class PhasorStream:
    """Ordered complex RMS phasor sequence with full provenance."""

    frame_indices: np.ndarray
    timestamps: np.ndarray
    values: np.ndarray
    fps: float
    window: WindowSpec
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.frame_indices = np.asarray(self.frame_indices, dtype=np.int64)
        self.timestamps = np.asarray(self.timestamps, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if not (self.frame_indices.size == self.timestamps.size == self.values.size):
            raise ValueError("frame_indices, timestamps and values must align")
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise ValueError("phasor values must be finite")

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, i: int) -> PhasorFrame:
        return PhasorFrame(
            int(self.frame_indices[i]), float(self.timestamps[i]), complex(self.values[i])
        )

    @property
    def frames(self) -> tuple[PhasorFrame, ...]:
        return tuple(self[i] for i in range(len(self)))

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def angle(self) -> np.ndarray:
        """Principal-value phase angle in (-pi, pi]."""
        a = np.angle(self.values)
        a[a <= -np.pi] += 2.0 * np.pi
        return a


def demodulate(x: Waveform, w: WindowSpec) -> np.ndarray:
    """Shift ``x`` to the synchronous rotating frame: y[p] = x[p]*exp(-j*w0*p).

    The demodulation frequency is the window's bin frequency
    ``fs / n_per_cycle``; the caller is responsible for matching it to the
    carrier of ``x``.
    """
    p = x.sample_indices.astype(np.float64)
    return x.samples * np.exp(-1j * w.omega0 * p)


def estimate_phasor_at(x: Waveform, w: WindowSpec, m: int) -> complex:
    """Single-frame phasor by the literal one-expression DFT.

    Evaluates ``(sqrt(2)/L) * sum_n x[m+n] * exp(-j*w0*(m+n))`` directly,
    with m an absolute sample index.  This is the reference form the
    streaming estimator is checked against.
    """
    L = w.length
    local = m - x.start_index
    if local < 0 or local + L > x.n_samples:
        raise ValueError(f"window [{m}, {m + L}) overruns the signal")
    n = m + np.arange(L, dtype=np.float64)
    return complex(
        np.sqrt(2.0) / L * np.sum(x.samples[local : local + L] * np.exp(-1j * w.omega0 * n))
    )


def _apply_antialias(y: np.ndarray, f: FilterSpec) -> tuple[np.ndarray, int, int]:
    """Zero-phase filtered copy of ``y`` plus the fully-valid index range."""
    gd = f.group_delay
    n = y.size
    if 2 * gd >= n:
        raise ValueError(
            f"signal of {n} samples is shorter than the filter transient "
            f"({2 * gd} samples)"
        )
    z = np.convolve(y, f.taps, mode="full")
    return z[gd : gd + n], gd, n - 1 - gd


def estimate_phasors(
    x: Waveform,
    w: WindowSpec,
    r: ReportingSpec | None = None,
    metadata: dict | None = None,
) -> PhasorStream:
    """Estimate the phasor stream of ``x`` for window ``w`` at rate ``r``.

    The window average is evaluated at every sample index m and the result
    decimated by D = fs/fps (D must be an integer).  Frames whose window
    would overrun the signal, or overlap the anti-alias filter transient,
    are not emitted.

    Raises:
        ValueError: signal shorter than one window, non-integer decimation,
            or no frame survives the validity constraints.
    """
    fs = x.fs
    L = w.length
    n = x.n_samples
    if n < L:
        raise ValueError(f"signal of {n} samples is shorter than one window (L={L})")

    fps = fs if r is None else r.fps
    ratio = fs / fps
    D = int(round(ratio))
    if abs(ratio - D) > 1e-9 or D < 1:
        raise ValueError(f"fs/fps must be a positive integer, got {ratio}")
    offset = 0 if r is None else r.offset
    if offset >= D:
        raise ValueError(f"decimation offset {offset} must be < D={D}")

    y = demodulate(x, w)
    lo, hi = 0, n - 1
    aa = None if r is None else r.antialias
    if aa is not None and aa.taps.size > 1:
        y, lo, hi = _apply_antialias(y, aa)

    window_sums = np.lib.stride_tricks.sliding_window_view(y, L).sum(axis=1)
    m_rel = np.arange(n - L + 1)
    keep = (m_rel >= lo) & (m_rel + L - 1 <= hi) & ((m_rel - offset) % D == 0)
    m_rel = m_rel[keep]
    if m_rel.size == 0:
        raise ValueError("no frame fits the signal under the given constraints")
    values = window_sums[keep] * (np.sqrt(2.0) / L)

    m_abs = x.start_index + m_rel
    shift = 0.0
    if w.timestamp_convention is TimestampConvention.CENTER:
        shift = (L - 1) / 2.0
    timestamps = (m_abs + shift) / fs

    meta = {
        "fs_hz": fs,
        "h": w.h,
        "n_per_cycle": w.n_per_cycle,
        "window_samples": L,
        "fps": fps,
        "decimation": D,
        "decimation_offset": offset,
        "timestamp_convention": w.timestamp_convention.value,
        "antialias": "off" if aa is None else "on",
    }
    if aa is not None:
        meta["antialias_taps"] = int(aa.taps.size)
        meta["antialias_cutoff_hz"] = aa.cutoff_hz
    meta.update(x.meta)
    if metadata:
        meta.update(metadata)

    return PhasorStream(
        frame_indices=m_abs,
        timestamps=timestamps,
        values=values,
        fps=fps,
        window=w,
        metadata=meta,
    )


def filter_response(taps: np.ndarray, freqs_hz: np.ndarray, fs: float) -> np.ndarray:
    """Complex frequency response of an FIR filter at the given frequencies."""
    taps = np.asarray(taps, dtype=np.float64)
    f = np.atleast_1d(np.asarray(freqs_hz, dtype=np.float64))
    n = np.arange(taps.size)
    return np.exp(-2j * np.pi * np.outer(f / fs, n)) @ taps


def design_antialias(fps: float, fs: float, max_taps: int = 4001) -> FilterSpec:
    """Design the decimation low-pass for reporting rate ``fps``.

    Kaiser-window FIR with passband [0, 0.4*fps] flat to 0.1 % and at least
    60 dB attenuation from 0.5*fps up.  ``fps == fs`` yields the identity
    single-tap filter.

    Raises:
        FilterDesignError: the specification needs more than ``max_taps``
            coefficients, or the designed filter misses the template.
    """
    ratio = fs / fps
    if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
        raise ValueError(f"fs/fps must be a positive integer, got {ratio}")
    if int(round(ratio)) == 1:
        return FilterSpec(taps=np.array([1.0]), cutoff_hz=0.5 * fps)

    pass_edge = 0.4 * fps
    stop_edge = 0.5 * fps
    # 65 dB Kaiser design leaves margin over the 60 dB / 0.1 % template.
    n_taps, beta = scipy.signal.kaiserord(65.0, (stop_edge - pass_edge) / (0.5 * fs))
    if n_taps % 2 == 0:
        n_taps += 1
    if n_taps > max_taps:
        raise FilterDesignError(
            f"anti-alias template for fps={fps}, fs={fs} requires {n_taps} taps "
            f"(budget {max_taps})"
        )
    taps = scipy.signal.firwin(
        n_taps, (pass_edge + stop_edge) / 2.0, window=("kaiser", beta), fs=fs
    )
    taps = taps / taps.sum()

    grid_pass = np.linspace(0.0, pass_edge, 257)
    grid_stop = np.linspace(stop_edge, fs / 2.0, 513)
    dev_pass = np.max(np.abs(np.abs(filter_response(taps, grid_pass, fs)) - 1.0))
    peak_stop = np.max(np.abs(filter_response(taps, grid_stop, fs)))
    if dev_pass > 1e-3 or peak_stop > 1e-3:
        raise FilterDesignError(
            f"designed filter misses the template: passband deviation {dev_pass:.2e}, "
            f"stopband peak {peak_stop:.2e}"
        )
    return FilterSpec(taps=taps, cutoff_hz=(pass_edge + stop_edge) / 2.0)
