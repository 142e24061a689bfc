"""Closed-form frequency response of the window-averaging stage.

Feeding a complex exponential ``exp(j*lam*p)`` through the L-sample window
average multiplies it by the complex gain

    H1(lam, L) = (sqrt(2)/L) * sum_{n=0..L-1} exp(j*lam*n)
               = (sqrt(2)/L) * exp(j*lam*(L-1)/2) * sin(L*lam/2)/sin(lam/2)

a Dirichlet kernel with linear phase.  Its magnitude G attenuates an
oscillation component, its angle theta shifts the oscillation phase, and its
periodic zeros (comb nulls) cancel components entirely.  This module
evaluates the gain, decomposes the demodulated signal of a modulated carrier
into its exponential components, and predicts the oscillation visible in the
estimated phasor stream for both modulation mechanisms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .estimator import WindowSpec
from .signal import ModulationKind, ModulationSpec, WaveformSpec

__all__ = [
    "GainClass",
    "ComplexGain",
    "Channel",
    "BasebandTerm",
    "BasebandDecomposition",
    "PredictedOscillation",
    "ResponsePoint",
    "wrap_angle",
    "h1",
    "h1_bruteforce",
    "comb_nulls",
    "decompose_baseband",
    "predict_oscillation",
    "response_curve",
]

SQRT2 = np.sqrt(2.0)

#: |sin(lam/2)| below this is treated as lam = 0 (mod 2*pi).
NEAR_DC_TOL = 1e-9
#: |sin(L*lam/2)| below this (away from DC) is treated as a comb null.
NEAR_NULL_TOL = 1e-12


class GainClass(enum.Enum):
    DC = "dc"
    NULL = "null"
    REGULAR = "regular"


class Channel(enum.Enum):
    """Which scalar series of the phasor stream carries the oscillation."""

    MAGNITUDE = "magnitude"
    ANGLE = "angle"


def wrap_angle(x):
    """Wrap an angle (or array of angles) in radians to (-pi, pi]."""
    w = np.angle(np.exp(1j * np.asarray(x, dtype=np.float64)))
    w = np.where(w <= -np.pi, w + 2.0 * np.pi, w)
    if np.ndim(x) == 0:
        return float(w)
    return w


@dataclass(frozen=True)
class ComplexGain:
    """Value of H1 at one normalized frequency, with its classification.

    ``g`` and ``theta`` are derived from ``value`` so that
    ``value == g * exp(j*theta)`` holds by construction; a sign flip of the
    real Dirichlet kernel therefore lands in ``theta`` as a pi offset
    automatically.
    """

    lam: float
    value: complex
    classification: GainClass

    @property
    def g(self) -> float:
        return abs(self.value)

    @property
    def theta(self) -> float:
        """Angle in radians, principal value in (-pi, pi]."""
        a = float(np.angle(self.value))
        return a + 2.0 * np.pi if a <= -np.pi else a

    @property
    def theta_deg(self) -> float:
        """Angle in degrees reduced to [0, 360), the table convention."""
        return float(np.degrees(self.theta) % 360.0)


def h1(lam: float, L: int) -> ComplexGain:
    """Evaluate the window complex gain at ``lam`` rad/sample.

    The removable singularity at lam = 0 (mod 2*pi) is evaluated by limit,
    giving magnitude sqrt(2).  Classification follows the magnitude
    structure: DC within ``NEAR_DC_TOL`` of a multiple of 2*pi, NULL where
    the kernel numerator vanishes elsewhere, REGULAR otherwise.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    lam = float(lam)
    s_half = np.sin(lam / 2.0)
    s_full = np.sin(L * lam / 2.0)
    if s_half == 0.0:
        kernel = L * np.cos(L * lam / 2.0) / np.cos(lam / 2.0)
    else:
        kernel = s_full / s_half
    value = complex(SQRT2 / L * np.exp(1j * lam * (L - 1) / 2.0) * kernel)

    if abs(s_half) < NEAR_DC_TOL:
        cls = GainClass.DC
    elif abs(s_full) < NEAR_NULL_TOL:
        cls = GainClass.NULL
    else:
        cls = GainClass.REGULAR
    return ComplexGain(lam=lam, value=value, classification=cls)


def h1_bruteforce(lam: float, L: int) -> complex:
    """Literal O(L) summation of the window gain; oracle for ``h1``."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    n = np.arange(L, dtype=np.float64)
    return complex(SQRT2 / L * np.sum(np.exp(1j * float(lam) * n)))


def comb_nulls(L: int, fs: float, f_max: float) -> list[float]:
    """Oscillation frequencies in (0, f_max] cancelled by the window.

    The nulls sit on the grid fm = q*fs/L for positive integers q, except
    where fm is a multiple of fs (there the gain is sqrt(2), not 0; such
    points cannot occur below fs/2 anyway).
    """
    if f_max >= fs / 2.0:
        raise ValueError(f"f_max must be < fs/2, got f_max={f_max}, fs={fs}")
    base = fs / L
    q_max = int(np.floor(f_max / base + 1e-12))
    nulls = [q * base for q in range(1, q_max + 1)]
    return [f for f in nulls if (f / fs) % 1.0 != 0.0]


@dataclass(frozen=True)
class BasebandTerm:
    """One rotating component of the demodulated signal."""

    lam: float
    coeff: complex
    label: str


@dataclass(frozen=True)
class BasebandDecomposition:
    """Demodulated signal written as a DC term plus five exponentials.

    ``dc`` is the constant term of y[p] itself; the window average maps it
    to the output DC phasor ``c0 = sqrt(2)*dc = v_rms*exp(j*phi0)``.
    """

    dc: complex
    terms: tuple[BasebandTerm, ...]

    def __post_init__(self) -> None:
        if len(self.terms) != 5:
            raise ValueError(f"expected exactly five terms, got {len(self.terms)}")

    @property
    def c0(self) -> complex:
        """DC phasor seen at the estimator output."""
        return SQRT2 * self.dc

    def reconstruct(self, p: np.ndarray) -> np.ndarray:
        """Evaluate the decomposition at sample indices ``p``."""
        p = np.asarray(p, dtype=np.float64)
        y = np.full(p.shape, self.dc, dtype=np.complex128)
        for t in self.terms:
            y += t.coeff * np.exp(1j * t.lam * p)
        return y


def decompose_baseband(w: WaveformSpec, m: ModulationSpec) -> BasebandDecomposition:
    """Exponential decomposition of the demodulated modulated carrier.

    Under magnitude modulation the decomposition is exact.  Under phase
    modulation it uses the first-order expansion
    ``exp(j*b*sin(.)) ~ 1 + j*b*sin(.)`` on both carrier branches, accurate
    to 0.5 % for indices below 0.1 rad.

    The five rotating terms sit at -2*w0, +Wm, -Wm, -2*w0+Wm and -2*w0-Wm
    rad/sample.  The last two are demodulation images, not physical
    oscillations; they matter only when decimation aliases them onto Wm.
    """
    if m.kind is ModulationKind.NONE:
        raise ValueError("decomposition requires a modulated signal")
    w0 = w.omega0
    om = 2.0 * np.pi * m.fm / w.fs
    v = w.v_rms
    e_p0 = np.exp(1j * w.phi0)

    dc = SQRT2 * v / 2.0 * e_p0
    carrier_image = BasebandTerm(-2.0 * w0, SQRT2 * v / 2.0 * np.conj(e_p0), "carrier_image")

    if m.kind is ModulationKind.MAGNITUDE:
        k = SQRT2 * v * m.index / 4.0 / 1j
    else:
        k = SQRT2 * v * m.index / 4.0

    up = BasebandTerm(om, k * np.exp(1j * (w.phi0 + m.phim)), "oscillation_upper")
    lo = BasebandTerm(-om, -k * np.exp(1j * (w.phi0 - m.phim)), "oscillation_lower")
    if m.kind is ModulationKind.MAGNITUDE:
        img_up = BasebandTerm(
            -2.0 * w0 + om, k * np.exp(-1j * (w.phi0 - m.phim)), "image_upper"
        )
        img_lo = BasebandTerm(
            -2.0 * w0 - om, -k * np.exp(-1j * (w.phi0 + m.phim)), "image_lower"
        )
    else:
        # The conjugate carrier branch carries exp(-j*b*sin(.)), so the
        # linearized image coefficients flip sign relative to magnitude
        # modulation.
        img_up = BasebandTerm(
            -2.0 * w0 + om, -k * np.exp(-1j * (w.phi0 - m.phim)), "image_upper"
        )
        img_lo = BasebandTerm(
            -2.0 * w0 - om, k * np.exp(-1j * (w.phi0 + m.phim)), "image_lower"
        )

    return BasebandDecomposition(dc=dc, terms=(carrier_image, up, lo, img_up, img_lo))


@dataclass(frozen=True)
class PredictedOscillation:
    """Oscillation predicted in one output channel of the phasor stream.

    ``amplitude`` is in RMS per-unit for the magnitude channel and radians
    for the angle channel; ``phase`` is the sine-convention phase in
    radians, so the channel oscillates as ``amplitude*sin(Wm*m + phase)``
    around its DC value.
    """

    channel: Channel
    amplitude: float
    phase: float
    fm: float


def predict_oscillation(
    w: WaveformSpec, m: ModulationSpec, window: WindowSpec
) -> PredictedOscillation:
    """Closed-form oscillation seen in the phasor stream.

    Neglecting the demodulation images, the stream's magnitude channel
    under magnitude modulation (and its angle channel under phase
    modulation) oscillates with amplitude ``G*sqrt(2)*v_rms*index/2``
    (respectively ``G*sqrt(2)*index/2`` radians) and phase ``phim + theta``,
    where G and theta come from the window gain at the oscillation
    frequency.  On a comb null the amplitude is exactly zero.
    """
    if m.kind is ModulationKind.NONE:
        raise ValueError("prediction requires a modulated signal")
    om = 2.0 * np.pi * m.fm / w.fs
    cg = h1(om, window.length)
    if m.kind is ModulationKind.MAGNITUDE:
        channel = Channel.MAGNITUDE
        amplitude = cg.g * SQRT2 * w.v_rms * m.index / 2.0
    else:
        channel = Channel.ANGLE
        amplitude = cg.g * SQRT2 * m.index / 2.0
    if cg.classification is GainClass.NULL:
        amplitude = 0.0
    return PredictedOscillation(
        channel=channel,
        amplitude=float(amplitude),
        phase=wrap_angle(m.phim + cg.theta),
        fm=m.fm,
    )


@dataclass(frozen=True)
class ResponsePoint:
    fm_hz: float
    h: int
    length: int
    g: float
    theta_deg: float
    classification: GainClass


def response_curve(
    h_list: list[int], fs: float, n_per_cycle: int, f_grid: np.ndarray
) -> list[ResponsePoint]:
    """Tabulate gain magnitude and phase over oscillation frequencies.

    One row per (h, fm) pair, grouped by window length.  The grid must lie
    strictly inside (0, fs/2).
    """
    f_grid = np.asarray(f_grid, dtype=np.float64)
    if f_grid.size == 0:
        raise ValueError("empty frequency grid")
    if np.any(f_grid <= 0.0) or np.any(f_grid >= fs / 2.0):
        raise ValueError("frequency grid must lie strictly inside (0, fs/2)")
    rows = []
    for h in h_list:
        L = int(h) * int(n_per_cycle)
        for fm in f_grid:
            cg = h1(2.0 * np.pi * fm / fs, L)
            rows.append(
                ResponsePoint(
                    fm_hz=float(fm),
                    h=int(h),
                    length=L,
                    g=cg.g,
                    theta_deg=cg.theta_deg,
                    classification=cg.classification,
                )
            )
    return rows
