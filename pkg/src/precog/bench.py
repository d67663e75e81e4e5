"""Runtime scaling of training and detection versus series length."""

from __future__ import annotations

import time
from statistics import median
from typing import NamedTuple, Sequence

import numpy as np

from .core import InvalidSizes, PrecogConfig, TimeSeries
from .detector import detect, train

#: smallest benchmarkable series
MIN_BENCH_SIZE = 16


class BenchRow(NamedTuple):
    size: int
    train_s: float
    predict_s: float


def _tiled_series(size: int, seed: int, cfg: PrecogConfig) -> TimeSeries:
    """A size-point series at working resolution: a repeated ramp-and-plateau
    base pattern plus Gaussian noise."""
    rng = np.random.default_rng(seed)
    base = np.concatenate([np.full(400, 40.0), 40.0 + 30.0 * np.arange(600) / 599.0])
    values = np.resize(base, size) + rng.normal(0.0, 0.75, size)
    return TimeSeries(
        np.arange(size) * cfg.resample_resolution, np.clip(values, 0.0, 100.0)
    )


def bench_scaling(
    sizes: Sequence[int],
    repetitions: int = 3,
    seed: int = 0,
    cfg: PrecogConfig | None = None,
) -> list[BenchRow]:
    """Time train and detect per series size; median of `repetitions` runs.

    Sizes must be sorted ascending and each at least MIN_BENCH_SIZE. Runs
    sequentially on a monotonic wall clock to avoid contention skew.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise InvalidSizes("no sizes given")
    if any(s < MIN_BENCH_SIZE for s in sizes):
        raise InvalidSizes(f"each size must be at least {MIN_BENCH_SIZE}")
    if sorted(sizes) != sizes:
        raise InvalidSizes("sizes must be sorted ascending")
    if repetitions < 1:
        raise InvalidSizes("repetitions must be at least 1")
    cfg = cfg or PrecogConfig()

    rows = []
    for size in sizes:
        series = _tiled_series(size, seed, cfg)
        train_times = []
        predict_times = []
        model = None
        for _ in range(repetitions):
            start = time.perf_counter()
            model = train(series, cfg)
            train_times.append(time.perf_counter() - start)
            start = time.perf_counter()
            detect(series, model, cfg)
            predict_times.append(time.perf_counter() - start)
        rows.append(BenchRow(size, median(train_times), median(predict_times)))
    return rows
