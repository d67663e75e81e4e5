"""Domain types, configuration, validation and model persistence.

Everything downstream (preprocessing, change-point detection, trend fitting,
the detector itself) works in a single unit system: timestamps and durations
in seconds, utilization values and slopes in percent and percent per second.
All types are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

SCHEMA_VERSION = 1


class PrecogError(Exception):
    """Base class for all errors raised by this package."""


class EmptySeries(PrecogError):
    """A time series with zero observations was supplied."""


class NonMonotonicTimestamps(PrecogError):
    """Timestamps are not strictly increasing."""


class ValueOutOfRange(PrecogError):
    """A utilization value lies outside the accepted [O, 100] band."""

    def __init__(self, index: int, value: float):
        super().__init__(f"value {value!r} at index {index} outside [0, 100]")
        self.index = index
        self.value = value


class SeriesTooShort(PrecogError):
    """The series has too few points for the requested operation."""


class SegmentTooShort(PrecogError):
    """The segment has too few points to fit a trend."""


class SchemaMismatch(PrecogError):
    """A model file was written with an unsupported schema version."""

    def __init__(self, found: int, expected: int = SCHEMA_VERSION):
        super().__init__(f"model schema version {found}, expected {expected}")
        self.found = found
        self.expected = expected


class ConfigMismatch(PrecogError):
    """Model and detection configuration disagree on an incompatible field."""


class InvalidParams(PrecogError):
    """Invalid configuration or generator parameters."""


class InvalidSizes(PrecogError):
    """Invalid benchmark size list."""


class EmptyInput(PrecogError):
    """An evaluation was requested over an empty result list."""


class ParseError(PrecogError):
    """A data file (CSV or model JSON) could not be parsed."""


class ClampWarning(UserWarning):
    """Values slightly above 100 (or below 0) were clamped during validation."""


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Memory-utilization observations of one VM.

    Attributes:
        timestamps: observation instants in seconds, strictly increasing
            once validated.
        values: utilization in percent, one per timestamp; in [0, 100]
            once validated.
    """

    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = _readonly(self.timestamps)
        v = _readonly(self.values)
        if len(t) != len(v):
            raise InvalidParams(
                f"timestamps ({len(t)}) and values ({len(v)}) differ in length"
            )
        if len(t) == 0:
            raise EmptySeries("series has no observations")
        object.__setattr__(self, "timestamps", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.timestamps)

    def segment(self, start: int, end: int) -> "TimeSeries":
        """Sub-series over the inclusive index span [start, end]."""
        return TimeSeries(self.timestamps[start : end + 1], self.values[start : end + 1])


@dataclass(frozen=True)
class PrecogConfig:
    """Tunable thresholds and processing parameters.

    Durations are seconds, utilization thresholds percent. Defaults:
    utilization ceiling 100%, critical time 7 days, 5-minute resampling,
    1-hour median smoothing, minimum fit quality 0.75, change-point z-score
    threshold 3, 65/35 train/test split.
    """

    threshold_u: float = 100.0
    critical_time: float = 7 * 86400.0
    resample_resolution: float = 300.0
    smoothing_window: float = 3600.0
    r2_min: float = 0.75
    cpd_z_threshold: float = 3.0
    min_segment_points: int = 5
    train_fraction: float = 0.65

    def __post_init__(self):
        if not 0.0 < self.threshold_u <= 100.0:
            raise InvalidParams(f"threshold_u must be in (0, 100], got {self.threshold_u}")
        if self.critical_time <= 0:
            raise InvalidParams("critical_time must be positive")
        if self.resample_resolution <= 0:
            raise InvalidParams("resample_resolution must be positive")
        if self.smoothing_window < self.resample_resolution:
            raise InvalidParams("smoothing_window must be >= resample_resolution")
        if not 0.0 < self.r2_min <= 1.0:
            raise InvalidParams(f"r2_min must be in (0, 1], got {self.r2_min}")
        if self.cpd_z_threshold <= 0:
            raise InvalidParams("cpd_z_threshold must be positive")
        if self.min_segment_points < 3:
            raise InvalidParams("min_segment_points must be at least 3")
        if not 0.0 < self.train_fraction < 1.0:
            raise InvalidParams("train_fraction must be in (0, 1)")


class Trend(NamedTuple):
    """A mined historic trend: segment time span and regression slope."""

    duration: float
    slope: float


class Window(NamedTuple):
    """An anomalous window over the analyzed series (inclusive indices)."""

    start_index: int
    end_index: int
    slope: float
    exit_time: float


@dataclass(frozen=True)
class FittedTrend:
    """A regression-characterized segment.

    exit_time is the projected time (seconds past the segment end) for the
    fitted line to reach the utilization threshold: 0 when the fitted end
    value is already at or above it, +inf when the slope is non-positive.
    """

    slope: float
    r2: float
    duration: float
    exit_time: float
    start_index: int
    end_index: int


@dataclass(frozen=True)
class TrendModel:
    """Output of training: saved historic trends plus their global maxima."""

    trends: tuple[Trend, ...]
    d_max: float
    s_max: float
    config_echo: PrecogConfig
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(
            self, "trends", tuple(Trend(float(d), float(s)) for d, s in self.trends)
        )


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """Per-point anomaly mask plus the anomalous windows found."""

    mask: np.ndarray
    windows: tuple[Window, ...]
    is_leaking: bool

    def __post_init__(self):
        object.__setattr__(self, "mask", _readonly(self.mask, dtype=bool))
        object.__setattr__(self, "windows", tuple(self.windows))


#: values this far outside [0, 100] are clamped rather than rejected
CLAMP_TOLERANCE = 0.5


def validate_series(ts: TimeSeries) -> TimeSeries:
    """Validate and normalize an ingested series.

    Timestamps must be strictly increasing. Values must lie within
    [-0.5, 100.5]; the sub-ranges [-0.5, 0) and (100, 100.5] are clamped to
    the [0, 100] band (monitoring data commonly overshoots by rounding) and
    a ClampWarning is emitted with the number of clamped points. Idempotent.
    """
    t, v = ts.timestamps, ts.values
    if len(t) > 1:
        deltas = np.diff(t)
        bad = np.flatnonzero(deltas <= 0)
        if bad.size:
            i = int(bad[0]) + 1
            raise NonMonotonicTimestamps(
                f"timestamp at index {i} ({t[i]!r}) does not increase past {t[i - 1]!r}"
            )
    out_low = v < -CLAMP_TOLERANCE
    out_high = v > 100.0 + CLAMP_TOLERANCE
    if out_low.any() or out_high.any():
        i = int(np.flatnonzero(out_low | out_high)[0])
        raise ValueOutOfRange(i, float(v[i]))
    clamped = (v < 0.0) | (v > 100.0)
    n_clamped = int(clamped.sum())
    if n_clamped == 0:
        return ts
    warnings.warn(
        f"clamped {n_clamped} value(s) to the [0, 100] band", ClampWarning, stacklevel=2
    )
    return TimeSeries(t, np.clip(v, 0.0, 100.0))


def _config_to_dict(cfg: PrecogConfig) -> dict:
    return asdict(cfg)


def _config_from_dict(data: dict) -> PrecogConfig:
    try:
        return PrecogConfig(**data)
    except TypeError as exc:
        raise ParseError(f"bad config block in model file: {exc}") from None


def save_model(model: TrendModel, path) -> None:
    """Write a trend model as versioned JSON. Values round-trip exactly."""
    payload = {
        "schema_version": model.schema_version,
        "config": _config_to_dict(model.config_echo),
        "trends": [
            {"duration_s": tr.duration, "slope_pct_per_s": tr.slope} for tr in model.trends
        ],
        "d_max_s": model.d_max,
        "s_max_pct_per_s": model.s_max,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_model(path) -> TrendModel:
    """Read a trend model written by save_model.

    Raises SchemaMismatch for unknown schema versions and ParseError for
    files that are not well-formed model JSON.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from None
    try:
        version = int(data["schema_version"])
        if version != SCHEMA_VERSION:
            raise SchemaMismatch(version)
        return TrendModel(
            trends=tuple(
                Trend(float(tr["duration_s"]), float(tr["slope_pct_per_s"]))
                for tr in data["trends"]
            ),
            d_max=float(data["d_max_s"]),
            s_max=float(data["s_max_pct_per_s"]),
            config_echo=_config_from_dict(data["config"]),
            schema_version=version,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed model file ({exc})") from None
