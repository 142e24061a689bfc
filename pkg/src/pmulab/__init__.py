"""pmulab: a deterministic laboratory for windowed-DFT phasor estimation.

The package synthesizes modulated power-system test waveforms, estimates
their phasors with a multi-cycle rectangular-window DFT, evaluates the
estimator's closed-form complex frequency response, and inverts the
frequency-dependent attenuation and phase shift the window imposes on
oscillation components.

Typical flow::

    import pmulab

    w = pmulab.WaveformSpec()                                # 60 Hz, 960 Hz, 4 s
    m = pmulab.ModulationSpec.magnitude(0.01, fm=20.0)
    stream = pmulab.estimate_phasors(
        pmulab.synthesize(w, m),
        pmulab.WindowSpec.from_rates(h=8, fs=w.fs, f0=w.f0),
        pmulab.ReportingSpec(fps=240.0),
    )
    est = pmulab.fit_sinusoid(stream, pmulab.Channel.MAGNITUDE, fm=20.0)
    rec = pmulab.recover(est, stream.window, fs=w.fs)        # ~0.01 = v_rms*index
"""

from .signal import (
    LinearizationWarning,
    ModulationKind,
    ModulationSpec,
    Waveform,
    WaveformSpec,
    synthesize,
)
from .estimator import (
    FilterDesignError,
    FilterSpec,
    PhasorFrame,
    PhasorStream,
    ReportingSpec,
    TimestampConvention,
    WindowSpec,
    demodulate,
    design_antialias,
    estimate_phasor_at,
    estimate_phasors,
    filter_response,
)
from .response import (
    BasebandDecomposition,
    BasebandTerm,
    Channel,
    ComplexGain,
    GainClass,
    PredictedOscillation,
    ResponsePoint,
    comb_nulls,
    decompose_baseband,
    h1,
    h1_bruteforce,
    predict_oscillation,
    response_curve,
    wrap_angle,
)
from .analysis import (
    AnalysisRecord,
    NoOscillationError,
    OscillationEstimate,
    RecoveredOscillation,
    RecoveryError,
    analyze_stream,
    channel_signal,
    estimate_fm,
    fit_sinusoid,
    recover,
)
from .validation import REFERENCE_TABLE1, TABLE1_SETUP, Table1Cell, reproduce_table1
from . import io

__version__ = "0.1.0"

__all__ = [
    "io",
    "LinearizationWarning",
    "ModulationKind",
    "ModulationSpec",
    "Waveform",
    "WaveformSpec",
    "synthesize",
    "FilterDesignError",
    "FilterSpec",
    "PhasorFrame",
    "PhasorStream",
    "ReportingSpec",
    "TimestampConvention",
    "WindowSpec",
    "demodulate",
    "design_antialias",
    "estimate_phasor_at",
    "estimate_phasors",
    "filter_response",
    "BasebandDecomposition",
    "BasebandTerm",
    "Channel",
    "ComplexGain",
    "GainClass",
    "PredictedOscillation",
    "ResponsePoint",
    "comb_nulls",
    "decompose_baseband",
    "h1",
    "h1_bruteforce",
    "predict_oscillation",
    "response_curve",
    "wrap_angle",
    "AnalysisRecord",
    "NoOscillationError",
    "OscillationEstimate",
    "RecoveredOscillation",
    "RecoveryError",
    "analyze_stream",
    "channel_signal",
    "estimate_fm",
    "fit_sinusoid",
    "recover",
    "REFERENCE_TABLE1",
    "TABLE1_SETUP",
    "Table1Cell",
    "reproduce_table1",
]
