"""Linear trend characterization of series segments.

A segment is summarized by its ordinary-least-squares line: slope (percent
per second), R² goodness of fit, time span, and the projected time for the
fitted line to climb from its value at the segment end up to the
utilization threshold ("exit time").
"""

from __future__ import annotations

import numpy as np

from .core import FittedTrend, PrecogConfig, SegmentTooShort, TimeSeries


def time_to_threshold(slope: float, end_value: float, threshold: float) -> float:
    """Projected seconds until a line at `end_value` reaches `threshold`.

    Zero when the end value is already at or above the threshold, +inf when
    the slope is non-positive (the line never gets there).
    """
    if end_value >= threshold:
        return 0.0
    if slope <= 0.0:
        return float("inf")
    return (threshold - end_value) / slope


def fit_line(segment: TimeSeries) -> tuple[float, float, float]:
    """Ordinary least squares over (timestamp, value).

    Returns (slope, intercept, r2) where the intercept is the fitted value
    at the segment's first timestamp; timestamps are shifted to the segment
    start before regression so epoch-scale abscissae stay well conditioned.
    R² is 1 - SS_res/SS_tot, with the convention r2 = 1 for an exactly
    constant segment (SS_tot = 0 and SS_res = 0) and 0 if SS_tot = 0 while
    SS_res is not.
    """
    n = len(segment)
    if n < 2:
        raise SegmentTooShort(f"need at least 2 points to fit a line, got {n}")
    x = segment.timestamps - segment.timestamps[0]
    v = segment.values
    xm = x.mean()
    vm = v.mean()
    dx = x - xm
    dv = v - vm
    sxx = float(dx @ dx)
    sxv = float(dx @ dv)
    slope = sxv / sxx
    intercept = vm - slope * xm

    residuals = dv - slope * dx
    ss_res = float(residuals @ residuals)
    ss_tot = float(dv @ dv)
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(min(max(r2, 0.0), 1.0))


def characterize(
    segment: TimeSeries, cfg: PrecogConfig | None = None, *, start_index: int = 0
) -> FittedTrend:
    """Fit a segment and derive duration and exit time.

    The segment must have at least cfg.min_segment_points points. Exit time
    is measured from the fitted line's value at the last timestamp, not from
    the raw final sample, so one noisy observation cannot flip the verdict.
    `start_index` places the result's index span inside a parent series.
    """
    cfg = cfg or PrecogConfig()
    n = len(segment)
    if n < cfg.min_segment_points:
        raise SegmentTooShort(
            f"segment of {n} points is below min_segment_points={cfg.min_segment_points}"
        )
    slope, intercept, r2 = fit_line(segment)
    duration = float(segment.timestamps[-1] - segment.timestamps[0])
    v_end = intercept + slope * duration
    return FittedTrend(
        slope=slope,
        r2=r2,
        duration=duration,
        exit_time=time_to_threshold(slope, v_end, cfg.threshold_u),
        start_index=start_index,
        end_index=start_index + n - 1,
    )


class SeriesFitCache:
    """O(1) least-squares fits over arbitrary index spans of one series.

    Prefix sums of the (shifted) abscissa and the values are built once;
    each span fit is then a handful of arithmetic operations, which keeps
    the all-pairs scan done in training tractable on long series. Span
    moments are re-shifted to the span start so conditioning matches a
    direct fit of the extracted segment.
    """

    def __init__(self, ts: TimeSeries):
        t = ts.timestamps
        u = t - t[0]
        v = ts.values
        zero = np.zeros(1)
        self.timestamps = t
        self._u = u
        self._cu = np.concatenate([zero, np.cumsum(u)])
        self._cuu = np.concatenate([zero, np.cumsum(u * u)])
        self._cv = np.concatenate([zero, np.cumsum(v)])
        self._cvv = np.concatenate([zero, np.cumsum(v * v)])
        self._cuv = np.concatenate([zero, np.cumsum(u * v)])

    def fit_spans(self, start: int, ends: np.ndarray):
        """Vectorized fits of the inclusive spans [start, e] for e in `ends`.

        Returns (slopes, intercepts, r2s) arrays; intercepts are fitted
        values at the span start.
        """
        ends = np.asarray(ends, dtype=np.int64)
        n = (ends - start + 1).astype(float)
        ua = self._u[start]
        s1 = self._cu[ends + 1] - self._cu[start]
        s2 = self._cuu[ends + 1] - self._cuu[start]
        sv = self._cv[ends + 1] - self._cv[start]
        svv = self._cvv[ends + 1] - self._cvv[start]
        suv = self._cuv[ends + 1] - self._cuv[start]

        # shift abscissa to the span start: w = u - u[start]
        sw = s1 - n * ua
        sww = s2 - 2.0 * ua * s1 + n * ua * ua
        swv = suv - ua * sv

        mw = sw / n
        mv = sv / n
        sxx = sww - n * mw * mw
        sxv = swv - n * mw * mv
        ss_tot = np.maximum(svv - n * mv * mv, 0.0)

        slopes = sxv / np.maximum(sxx, 1e-300)
        intercepts = mv - slopes * mw
        ss_res = np.clip(ss_tot - slopes * sxv, 0.0, ss_tot)

        # SS_tot below the rounding noise of the prefix-sum differences is a
        # constant span: flat fit, r2 = 1 by convention
        noise_floor = (svv + 1.0) * 1e-12
        r2 = 1.0 - ss_res / np.maximum(ss_tot, 1e-300)
        r2 = np.where(ss_tot <= noise_floor, 1.0, np.clip(r2, 0.0, 1.0))
        return slopes, intercepts, r2

    def fit(self, start: int, end: int) -> tuple[float, float, float]:
        """Scalar (slope, intercept, r2) over the inclusive span [start, end]."""
        slopes, intercepts, r2s = self.fit_spans(start, np.array([end]))
        return float(slopes[0]), float(intercepts[0]), float(r2s[0])

    def trend(self, start: int, end: int, cfg: PrecogConfig) -> FittedTrend:
        """FittedTrend for the inclusive span [start, end]."""
        slope, intercept, r2 = self.fit(start, end)
        duration = float(self.timestamps[end] - self.timestamps[start])
        v_end = intercept + slope * duration
        return FittedTrend(
            slope=slope,
            r2=r2,
            duration=duration,
            exit_time=time_to_threshold(slope, v_end, cfg.threshold_u),
            start_index=start,
            end_index=end,
        )
