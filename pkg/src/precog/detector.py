"""Offline trend mining and online leak detection.

Training scans every pair of change points in the historic series: for each
fixed left anchor it keeps the local best fit (a candidate replaces the
incumbent only when both its duration and slope are at least as large, and
the pair is not an exact tie, so the first find wins and training is
deterministic). A local best whose fitted line would reach the utilization
threshold within the critical time is saved as a historic trend, and the
global (d_max, s_max) pair is advanced by the same conjunctive rule.

Detection fixes the right anchor at the last change point of the new series
and grows the segment leftward one change point at a time. A segment whose
fit is good (r2 >= r2_min) and whose exit time falls within the critical
time is marked anomalous when it dominates the global maxima, or failing
that, any single saved trend, in both duration and slope. The anomaly mask
is the union of marked segments.
"""

from __future__ import annotations

import math

import numpy as np

from .changepoint import detect_change_points
from .core import (
    ConfigMismatch,
    DetectionResult,
    PrecogConfig,
    SeriesTooShort,
    TimeSeries,
    Trend,
    TrendModel,
    Window,
    validate_series,
)
from .preprocess import preprocess
from .trendfit import SeriesFitCache, time_to_threshold


def train(ts: TimeSeries, cfg: PrecogConfig | None = None) -> TrendModel:
    """Mine historic trends from a preprocessed series.

    Returns a TrendModel with the saved (duration, slope) trends and the
    global maxima (d_max, s_max); both are (0, 0) / empty when the series
    shows no upward trend that would reach the threshold in time. Saved
    trends always have positive slope.
    """
    cfg = cfg or PrecogConfig()
    n = len(ts)
    if n < cfg.min_segment_points:
        raise SeriesTooShort(
            f"training needs at least {cfg.min_segment_points} points, got {n}"
        )
    points = np.asarray(detect_change_points(ts, cfg.cpd_z_threshold), dtype=np.int64)
    cache = SeriesFitCache(ts)
    t = ts.timestamps

    trends: list[Trend] = []
    d_max = 0.0
    s_max = 0.0
    for i in range(len(points) - 1):
        a = int(points[i])
        ends = points[i + 1 :]
        ends = ends[ends - a + 1 >= cfg.min_segment_points]
        if ends.size == 0:
            continue
        slopes, intercepts, r2s = cache.fit_spans(a, ends)
        durations = t[ends] - t[a]
        v_ends = intercepts + slopes * durations

        d_best = 0.0
        s_best = 0.0
        exit_best = None
        for j in np.flatnonzero(r2s >= cfg.r2_min):
            dur = durations[j]
            slope = slopes[j]
            if dur >= d_best and slope >= s_best and not (dur == d_best and slope == s_best):
                d_best, s_best = float(dur), float(slope)
                exit_best = time_to_threshold(slope, v_ends[j], cfg.threshold_u)
        if exit_best is None:
            continue
        if exit_best <= cfg.critical_time and s_best > 0.0:
            trends.append(Trend(d_best, s_best))
            if d_best >= d_max and s_best >= s_max:
                d_max, s_max = d_best, s_best

    return TrendModel(trends=tuple(trends), d_max=d_max, s_max=s_max, config_echo=cfg)


def _check_compatible(model: TrendModel, cfg: PrecogConfig) -> None:
    echo = model.config_echo
    if echo.threshold_u != cfg.threshold_u:
        raise ConfigMismatch(
            f"model trained with threshold_u={echo.threshold_u}, detecting with {cfg.threshold_u}"
        )
    if echo.resample_resolution != cfg.resample_resolution:
        raise ConfigMismatch(
            f"model trained at {echo.resample_resolution}s resolution, "
            f"detecting at {cfg.resample_resolution}s"
        )


def _mask_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1) + 1
    return [(int(run[0]), int(run[-1])) for run in np.split(idx, breaks)]


def detect(ts: TimeSeries, model: TrendModel, cfg: PrecogConfig | None = None) -> DetectionResult:
    """Flag anomalous windows of a preprocessed series against a model.

    The model must have been trained with the same utilization threshold and
    resampling resolution (ConfigMismatch otherwise); r2_min and the
    critical time may be tuned at detection time without retraining.
    """
    cfg = cfg or PrecogConfig()
    _check_compatible(model, cfg)
    n = len(ts)
    if n < 2:
        raise SeriesTooShort(f"detection needs at least 2 points, got {n}")
    points = detect_change_points(ts, cfg.cpd_z_threshold)
    cache = SeriesFitCache(ts)
    right = points[-1]

    marked = {}
    for left in reversed(points[:-1]):
        if right - left + 1 < cfg.min_segment_points:
            continue
        ft = cache.trend(left, right, cfg)
        if not (ft.exit_time <= cfg.critical_time and ft.r2 >= cfg.r2_min):
            continue
        if (ft.slope >= model.s_max and ft.duration >= model.d_max) or any(
            ft.slope >= tr.slope and ft.duration >= tr.duration for tr in model.trends
        ):
            marked[left] = ft

    mask = np.zeros(n, dtype=bool)
    for left in marked:
        mask[left : right + 1] = True
    windows = []
    for run_start, run_end in _mask_runs(mask):
        ft = marked[run_start]
        windows.append(Window(run_start, run_end, ft.slope, ft.exit_time))
    return DetectionResult(mask=mask, windows=tuple(windows), is_leaking=bool(windows))


def run_pipeline(
    raw: TimeSeries, cfg: PrecogConfig | None = None
) -> tuple[TrendModel, DetectionResult]:
    """Full per-VM pipeline: preprocess once, split, train, then detect.

    The preprocessed series is split at floor(train_fraction * N); the model
    is mined from the first part and detection runs on the remainder.
    """
    cfg = cfg or PrecogConfig()
    pre = preprocess(validate_series(raw), cfg)
    n = len(pre)
    split = math.floor(cfg.train_fraction * n)
    if split < cfg.min_segment_points or n - split < 2:
        raise SeriesTooShort(
            f"{n} preprocessed points cannot be split {cfg.train_fraction:.0%}/"
            f"{1 - cfg.train_fraction:.0%} into viable train and test parts"
        )
    model = train(pre.segment(0, split - 1), cfg)
    result = detect(pre.segment(split, n - 1), model, cfg)
    return model, result
