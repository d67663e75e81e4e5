"""Online memory-leak detection for cloud VMs.

The detector works from a single metric, the VM's memory utilization: it
mines historic linear trends offline and, online, flags windows whose fitted
trend would reach full utilization within a critical time.

Typical usage:

>>> from precog import PrecogConfig, run_pipeline
>>> model, result = run_pipeline(series, PrecogConfig())
>>> result.is_leaking
True
"""

from .bench import BenchRow, bench_scaling
from .changepoint import detect_change_points
from .core import (
    ClampWarning,
    ConfigMismatch,
    DetectionResult,
    EmptyInput,
    EmptySeries,
    FittedTrend,
    InvalidParams,
    InvalidSizes,
    NonMonotonicTimestamps,
    ParseError,
    PrecogConfig,
    PrecogError,
    SchemaMismatch,
    SegmentTooShort,
    SeriesTooShort,
    TimeSeries,
    Trend,
    TrendModel,
    ValueOutOfRange,
    Window,
    load_model,
    save_model,
    validate_series,
)
from .detector import detect, run_pipeline, train
from .evaluate import Metrics, classify_corpus, score_corpus, sweep
from .preprocess import median_smooth, preprocess, resample
from .synth import (
    CorpusEntry,
    CorpusGroup,
    PatternSpec,
    PATTERNS,
    default_corpus_spec,
    generate,
    generate_corpus,
)
from .trendfit import SeriesFitCache, characterize, fit_line, time_to_threshold

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "ClampWarning",
    "ConfigMismatch",
    "CorpusEntry",
    "CorpusGroup",
    "DetectionResult",
    "EmptyInput",
    "EmptySeries",
    "FittedTrend",
    "InvalidParams",
    "InvalidSizes",
    "Metrics",
    "NonMonotonicTimestamps",
    "ParseError",
    "PATTERNS",
    "PatternSpec",
    "PrecogConfig",
    "PrecogError",
    "SchemaMismatch",
    "SegmentTooShort",
    "SeriesFitCache",
    "SeriesTooShort",
    "TimeSeries",
    "Trend",
    "TrendModel",
    "ValueOutOfRange",
    "Window",
    "bench_scaling",
    "characterize",
    "classify_corpus",
    "default_corpus_spec",
    "detect",
    "detect_change_points",
    "fit_line",
    "generate",
    "generate_corpus",
    "load_model",
    "median_smooth",
    "preprocess",
    "resample",
    "run_pipeline",
    "save_model",
    "score_corpus",
    "sweep",
    "time_to_threshold",
    "train",
    "validate_series",
]
