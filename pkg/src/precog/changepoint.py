"""Change-point detection via z-scores of absolute first differences.

A change point is an index where the series deviates sharply from its local
pattern: the absolute first-order differences are z-scored against their own
mean and population standard deviation, and any difference whose z-score
exceeds the threshold marks the start of a new regime. The first and last
indexes are always included so downstream segment scans can jump from one
change point to the next instead of visiting every sample.
"""

from __future__ import annotations

import numpy as np

from .core import InvalidParams, SeriesTooShort, TimeSeries


def detect_change_points(ts: TimeSeries, z_threshold: float = 3.0) -> list[int]:
    """Return sorted unique change-point indexes, always containing 0 and N-1.

    The difference between x[i-1] and x[i] is attributed to index i (the
    later point, i.e. the first point of the new regime). If the standard
    deviation of the absolute differences is zero there is no variation to
    score and only the endpoints are returned.
    """
    if z_threshold <= 0:
        raise InvalidParams("z_threshold must be positive")
    n = len(ts)
    if n < 2:
        raise SeriesTooShort(f"need at least 2 points for change-point detection, got {n}")

    abs_diff = np.abs(np.diff(ts.values))
    std = abs_diff.std()
    points = {0, n - 1}
    if std > 0:
        z = (abs_diff - abs_diff.mean()) / std
        points.update(int(i) + 1 for i in np.flatnonzero(z > z_threshold))
    return sorted(points)
