"""Turn raw observations into a regular, smoothed series.

Both training and detection start here: raw per-VM samples are bucketed to a
fixed resolution (bucket means, gaps linearly interpolated) and then median
smoothed with a trailing window so isolated spikes do not masquerade as
change points.
"""

from __future__ import annotations

import numpy as np

from .core import InvalidParams, PrecogConfig, TimeSeries


def resample(ts: TimeSeries, resolution: float) -> TimeSeries:
    """Downsample to one value per fixed-width bucket.

    Buckets start at the first timestamp and are spaced exactly `resolution`
    seconds apart, covering the full observed span. Each bucket value is the
    arithmetic mean of the raw observations falling in it; interior buckets
    with no observations are filled by linear interpolation between their
    nearest non-empty neighbours.
    """
    if resolution <= 0:
        raise InvalidParams("resolution must be positive")
    t, v = ts.timestamps, ts.values
    t0 = t[0]
    n_buckets = int(np.floor((t[-1] - t0) / resolution)) + 1
    idx = np.floor((t - t0) / resolution).astype(np.int64)
    np.clip(idx, 0, n_buckets - 1, out=idx)

    sums = np.bincount(idx, weights=v, minlength=n_buckets)
    counts = np.bincount(idx, minlength=n_buckets)
    filled = counts > 0
    out = np.empty(n_buckets)
    out[filled] = sums[filled] / counts[filled]
    if not filled.all():
        # first and last buckets always contain a raw point, so this is
        # pure interpolation, never extrapolation
        bucket_pos = np.arange(n_buckets)
        out[~filled] = np.interp(bucket_pos[~filled], bucket_pos[filled], out[filled])

    return TimeSeries(t0 + resolution * np.arange(n_buckets), out)


def median_smooth(ts: TimeSeries, window: float) -> TimeSeries:
    """Trailing median filter over a regularly spaced series.

    Each output value is the median of the current point and its
    predecessors within `window` seconds (boundary inclusive); near the
    start, where fewer points are available, the median runs over what
    exists. Output length equals input length.
    """
    if window < 0:
        raise InvalidParams("window must be non-negative")
    n = len(ts)
    if n == 1:
        return ts
    spacing = ts.timestamps[1] - ts.timestamps[0]
    k = int(np.floor(window / spacing + 1e-9)) + 1
    k = min(k, n)
    if k == 1:
        return ts
    v = ts.values
    out = np.empty(n)
    for i in range(k - 1):
        out[i] = np.median(v[: i + 1])
    windows = np.lib.stride_tricks.sliding_window_view(v, k)
    out[k - 1 :] = np.median(windows, axis=1)
    return TimeSeries(ts.timestamps, out)


def preprocess(ts: TimeSeries, cfg: PrecogConfig | None = None) -> TimeSeries:
    """Resample then median-smooth with the configured parameters."""
    cfg = cfg or PrecogConfig()
    return median_smooth(resample(ts, cfg.resample_resolution), cfg.smoothing_window)
