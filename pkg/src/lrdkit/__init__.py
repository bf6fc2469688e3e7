"""Long-range dependence analysis of uniformly sampled time series.

Synthesis of fractional and locally fractional Gaussian noise, change-point
detection in mean and variance, H estimation by detrended fluctuation
analysis and by wavelet variance, chi-squared goodness of fit, and a batch
CLI tying the stages together.
"""

from .changepoint import PenaltyScan, Segmentation, detect_k, segment_contrast, select_k
from .cli import (
    AnalysisReport,
    AnalyzeConfig,
    CleanResult,
    RawRecording,
    analyze,
    clean_and_resample,
    emit,
    ingest,
)
from .dfa import DfaProfile, dfa_profile, default_windows, estimate_h_dfa
from .errors import (
    BandTooNarrowError,
    ConstraintError,
    DataQualityError,
    DegenerateDataError,
    LrdError,
    NumericalError,
    ParameterError,
    ParseError,
)
from .inference import (
    FractalEstimate,
    GofResult,
    MonteCarloReport,
    RegressionFit,
    SampleComparison,
    anova_f,
    benchmark_estimators,
    loglog_fit,
    mean_test,
)
from .series import (
    PiecewiseConstantTrend,
    PolynomialTrend,
    TrendSpec,
    UniformSeries,
    add_trend,
    aggregate,
    difference,
    read_csv,
    write_csv,
)
from .synthesis import FgnParams, SpectralProfile, fgn_autocovariance, generate_fgn, generate_lfgn
from .wavelet import (
    DEFAULT_WAVELET,
    BandSuggestion,
    MotherWavelet,
    ScaleSpectrum,
    default_scales,
    estimate_h_wavelet,
    goodness_of_fit,
    scale_spectrum,
    suggest_band,
    wavelet_coefficients,
)

__version__ = "0.1.0"
