"""Synthesis of single-phase test waveforms with sinusoidal modulation.

Two canonical oscillation mechanisms are supported on top of a nominal
carrier ``sqrt(2) * v_rms * cos(w0*p + phi0)``:

* magnitude modulation, which multiplies the carrier envelope by
  ``1 + index * sin(Wm*p + phim)``;
* phase modulation, which adds ``index * sin(Wm*p + phim)`` radians to the
  carrier argument.

``w0 = 2*pi*f0/fs`` and ``Wm = 2*pi*fm/fs`` are the carrier and oscillation
frequencies in radians per sample.  Synthesis is exact double precision and
fully deterministic: equal specs produce byte-identical sample arrays.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModulationKind",
    "ModulationSpec",
    "LinearizationWarning",
    "WaveformSpec",
    "Waveform",
    "synthesize",
]

#: Phase-modulation index above which the first-order small-angle expansion
#: of exp(j*index*sin(.)) is no longer accurate to 0.5 %.
SMALL_ANGLE_BOUND_RAD = 0.1


class LinearizationWarning(UserWarning):
    """Phase-modulation index too large for the small-angle linearization."""


class ModulationKind(enum.Enum):
    NONE = "none"
    MAGNITUDE = "magnitude"
    PHASE = "phase"


@dataclass(frozen=True)
class WaveformSpec:
    """Carrier parameters of a sampled single-phase waveform.

    Attributes:
        v_rms: RMS magnitude in per-unit, > 0.
        f0: carrier frequency in Hz.
        fs: sampling rate in Hz.  Must exceed the Nyquist limit 2*f0 and be
            an integer multiple of f0 (an integer number of samples/cycle).
        phi0: initial carrier phase in radians.
        n_samples: record length in samples.
    """

    v_rms: float = 1.0
    f0: float = 60.0
    fs: float = 960.0
    phi0: float = 0.0
    n_samples: int = 3840

    def __post_init__(self) -> None:
        if self.v_rms <= 0:
            raise ValueError(f"v_rms must be > 0, got {self.v_rms}")
        if self.f0 <= 0:
            raise ValueError(f"f0 must be > 0, got {self.f0}")
        if self.fs <= 2.0 * self.f0:
            raise ValueError(
                f"fs={self.fs} Hz violates the Nyquist condition fs > 2*f0 "
                f"for f0={self.f0} Hz"
            )
        ratio = self.fs / self.f0
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError(
                f"fs/f0 must be an integer number of samples per cycle; "
                f"fs={self.fs}, f0={self.f0} gives {ratio}"
            )
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")

    @classmethod
    def with_duration(cls, duration_s: float, **kwargs) -> "WaveformSpec":
        """Build a spec whose length is ``round(duration_s * fs)`` samples."""
        fs = kwargs.get("fs", 960.0)
        if duration_s <= 0:
            raise ValueError(f"duration_s must be > 0, got {duration_s}")
        return cls(n_samples=int(round(duration_s * fs)), **kwargs)

    @property
    def n_per_cycle(self) -> int:
        """Samples per carrier cycle, fs/f0."""
        return int(round(self.fs / self.f0))

    @property
    def omega0(self) -> float:
        """Carrier frequency in rad/sample."""
        return 2.0 * np.pi * self.f0 / self.fs

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.fs


@dataclass(frozen=True)
class ModulationSpec:
    """Oscillation riding on the carrier.

    ``index`` is dimensionless for magnitude modulation and radians for
    phase modulation.  ``kind=NONE`` ignores the remaining fields.
    """

    kind: ModulationKind = ModulationKind.NONE
    index: float = 0.0
    fm: float = 0.0
    phim: float = 0.0

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"modulation index must be >= 0, got {self.index}")
        if self.kind is not ModulationKind.NONE and self.fm <= 0:
            raise ValueError(
                f"oscillation frequency must be > 0 for kind={self.kind.value}, "
                f"got fm={self.fm}"
            )
        if self.kind is ModulationKind.PHASE and self.index >= SMALL_ANGLE_BOUND_RAD:
            warnings.warn(
                f"phase-modulation index {self.index} rad is at or above the "
                f"{SMALL_ANGLE_BOUND_RAD} rad small-angle bound; linearized "
                "predictions may err by more than 0.5 %",
                LinearizationWarning,
                stacklevel=2,
            )

    @classmethod
    def magnitude(cls, index: float, fm: float, phim: float = 0.0) -> "ModulationSpec":
        return cls(ModulationKind.MAGNITUDE, index, fm, phim)

    @classmethod
    def phase(cls, index: float, fm: float, phim: float = 0.0) -> "ModulationSpec":
        return cls(ModulationKind.PHASE, index, fm, phim)


@dataclass(eq=False)
class Waveform:
    """Real sampled signal plus the sampling rate and absolute start index."""

    samples: np.ndarray
    fs: float
    start_index: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")
        if self.fs <= 0:
            raise ValueError(f"fs must be > 0, got {self.fs}")

    @property
    def n_samples(self) -> int:
        return self.samples.size

    @property
    def sample_indices(self) -> np.ndarray:
        """Absolute sample indices p."""
        return self.start_index + np.arange(self.n_samples)

    @property
    def times(self) -> np.ndarray:
        """Sample times p/fs in seconds."""
        return self.sample_indices / self.fs


def synthesize(w: WaveformSpec, m: ModulationSpec | None = None) -> Waveform:
    """Generate the modulated waveform described by ``w`` and ``m``.

    Sample p of the output is

    * ``sqrt(2)*v_rms*(1 + index*sin(Wm*p + phim)) * cos(w0*p + phi0)`` for
      magnitude modulation,
    * ``sqrt(2)*v_rms * cos(w0*p + phi0 + index*sin(Wm*p + phim))`` for
      phase modulation,
    * the bare carrier for ``kind=NONE`` (or a zero index).
    """
    if m is None:
        m = ModulationSpec()
    p = np.arange(w.n_samples, dtype=np.float64)
    carrier_arg = w.omega0 * p + w.phi0
    peak = np.sqrt(2.0) * w.v_rms

    if m.kind is ModulationKind.MAGNITUDE:
        osc = np.sin(2.0 * np.pi * m.fm / w.fs * p + m.phim)
        samples = peak * (1.0 + m.index * osc) * np.cos(carrier_arg)
    elif m.kind is ModulationKind.PHASE:
        osc = np.sin(2.0 * np.pi * m.fm / w.fs * p + m.phim)
        samples = peak * np.cos(carrier_arg + m.index * osc)
    else:
        samples = peak * np.cos(carrier_arg)

    meta = {
        "v_rms": w.v_rms,
        "f0_hz": w.f0,
        "fs_hz": w.fs,
        "phi0_rad": w.phi0,
        "n_samples": w.n_samples,
        "modulation_kind": m.kind.value,
        "modulation_index": m.index,
        "fm_hz": m.fm,
        "phim_rad": m.phim,
    }
    return Waveform(samples=samples, fs=w.fs, start_index=0, meta=meta)
