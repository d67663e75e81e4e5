"""Seeded synthetic workloads: leak patterns and non-leaking negatives.

Leaking VMs show either a linearly increasing utilization curve or a
"sawtooth" (repeated rise and partial drop with a rising floor); the
negatives here are flat noise, a stable oscillation, and a ramp that merely
repeats, for a shorter stretch, a climb already present in its own history.
Series are one observation per minute over a configurable span (default
5 days) and are bit-identical for a given (pattern, params, seed).

Leak-labeled series are built so that projecting their generating slope
from the series end reaches 100% within the default 7-day critical time;
negative-labeled series end flat (or oscillating) and never do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import InvalidParams, TimeSeries

PATTERNS = (
    "linear",
    "linear_noise",
    "sawtooth",
    "flat_noise",
    "stable_periodic",
    "plateau_ramp_history",
)

#: ground-truth label per pattern
LEAK_PATTERNS = frozenset({"linear", "linear_noise", "sawtooth"})

_MINUTE = 60.0


def _defaults(pattern: str) -> dict:
    if pattern in ("linear", "linear_noise"):
        return {
            "base": 20.0,
            "end_level": 95.0,
            "onset_frac": 0.0,
            "sigma": 1.0 if pattern == "linear_noise" else 0.0,
        }
    if pattern == "sawtooth":
        return {
            "base": 15.0,
            "rise": 15.0,
            "drop_fraction": 0.6,
            "period_days": 0.6,
            "period_growth": 0.05,
            "rise_growth": 0.09,
            "sigma": 0.0,
        }
    if pattern == "flat_noise":
        return {"level": 40.0, "sigma": 1.0}
    if pattern == "stable_periodic":
        return {"level": 45.0, "amplitude": 10.0, "period_days": 0.75, "sigma": 0.0}
    if pattern == "plateau_ramp_history":
        return {"base": 22.0, "peak": 78.0}
    raise InvalidParams(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")


def _linear(t: np.ndarray, span: float, p: dict, rng) -> np.ndarray:
    base, end_level, onset = p["base"], p["end_level"], p["onset_frac"]
    if not 0.0 <= base < 100.0:
        raise InvalidParams(f"base level must be in [0, 100), got {base}")
    if not base < end_level <= 100.0:
        raise InvalidParams("end_level must be in (base, 100]")
    if not 0.0 <= onset < 1.0:
        raise InvalidParams("onset_frac must be in [0, 1)")
    t_on = onset * span
    slope = (end_level - base) / (span - t_on)
    v = base + slope * np.maximum(t - t_on, 0.0)
    return v + rng.normal(0.0, p["sigma"], len(t)) if p["sigma"] > 0 else v


def _sawtooth(t: np.ndarray, span: float, p: dict, rng) -> np.ndarray:
    base, rise, drop = p["base"], p["rise"], p["drop_fraction"]
    if not 0.0 <= base < 100.0:
        raise InvalidParams(f"base level must be in [0, 100), got {base}")
    if rise <= 0:
        raise InvalidParams("tooth rise must be positive")
    if not 0.0 < drop < 1.0:
        raise InvalidParams("drop_fraction must be in (0, 1) so the floor rises")
    if p["period_days"] <= 0:
        raise InvalidParams("period_days must be positive")
    v = np.empty(len(t))
    floor = base
    tooth_start = 0.0
    k = 0
    while tooth_start <= span:
        period = p["period_days"] * 86400.0 * (1.0 + p["period_growth"]) ** k
        rise_k = rise * (1.0 + p["rise_growth"]) ** k
        within = (t >= tooth_start) & (t < tooth_start + period)
        v[within] = floor + rise_k * (t[within] - tooth_start) / period
        floor += (1.0 - drop) * rise_k
        tooth_start += period
        k += 1
    return v + rng.normal(0.0, p["sigma"], len(t)) if p["sigma"] > 0 else v


def _flat_noise(t: np.ndarray, span: float, p: dict, rng) -> np.ndarray:
    if not 0.0 <= p["level"] <= 100.0:
        raise InvalidParams("level must be in [0, 100]")
    if p["sigma"] < 0:
        raise InvalidParams("sigma must be non-negative")
    v = np.full(len(t), float(p["level"]))
    return v + rng.normal(0.0, p["sigma"], len(t)) if p["sigma"] > 0 else v


def _stable_periodic(t: np.ndarray, span: float, p: dict, rng) -> np.ndarray:
    if p["amplitude"] < 0 or p["period_days"] <= 0:
        raise InvalidParams("amplitude must be >= 0 and period_days positive")
    v = p["level"] + p["amplitude"] * np.sin(2.0 * np.pi * t / (p["period_days"] * 86400.0))
    return v + rng.normal(0.0, p["sigma"], len(t)) if p["sigma"] > 0 else v


def _plateau_ramp_history(t: np.ndarray, span: float, p: dict, rng) -> np.ndarray:
    # one full climb early in the series, then the same slope replayed for
    # half the duration near the end; ends on a plateau
    base, peak = p["base"], p["peak"]
    if not 0.0 <= base < peak <= 100.0:
        raise InvalidParams("need 0 <= base < peak <= 100")
    ramp_start, ramp_end = 0.15 * span, 0.45 * span
    replay_start = 0.72 * span
    replay_end = 0.87 * span
    slope = (peak - base) / (ramp_end - ramp_start)
    low = base + 4.0
    v = np.full(len(t), base)
    seg = (t >= ramp_start) & (t < ramp_end)
    v[seg] = base + slope * (t[seg] - ramp_start)
    seg = (t >= ramp_end) & (t < replay_start)
    v[seg] = low
    seg = (t >= replay_start) & (t < replay_end)
    v[seg] = low + slope * (t[seg] - replay_start)
    seg = t >= replay_end
    v[seg] = low + slope * (replay_end - replay_start)
    return v


_GENERATORS = {
    "linear": _linear,
    "linear_noise": _linear,
    "sawtooth": _sawtooth,
    "flat_noise": _flat_noise,
    "stable_periodic": _stable_periodic,
    "plateau_ramp_history": _plateau_ramp_history,
}


def generate(
    pattern: str, params: dict | None = None, seed: int = 0, days: float = 5.0
) -> tuple[TimeSeries, bool]:
    """Generate one synthetic series and its ground-truth leak label.

    `params` overrides the pattern's defaults (see _defaults); unknown keys
    are rejected. The same (pattern, params, seed, days) always yields a
    bit-identical series.
    """
    if pattern not in _GENERATORS:
        raise InvalidParams(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    if days <= 0:
        raise InvalidParams("days must be positive")
    merged = _defaults(pattern)
    for key, value in (params or {}).items():
        if key not in merged:
            raise InvalidParams(f"pattern {pattern!r} has no parameter {key!r}")
        merged[key] = float(value)
    if pattern == "linear_noise" and merged["sigma"] <= 0:
        raise InvalidParams("linear_noise requires sigma > 0")

    n = int(round(days * 24 * 60))
    if n < 2:
        raise InvalidParams(f"span of {days} days yields fewer than 2 observations")
    t = np.arange(n) * _MINUTE
    rng = np.random.default_rng(seed)
    v = _GENERATORS[pattern](t, t[-1], merged, rng)
    return TimeSeries(t, np.clip(v, 0.0, 100.0)), pattern in LEAK_PATTERNS


@dataclass(frozen=True)
class PatternSpec:
    """How many series of one pattern to draw, and from which param ranges."""

    pattern: str
    count: int
    ranges: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CorpusGroup:
    """A named evaluation group mixing positive and negative patterns."""

    name: str
    members: tuple[PatternSpec, ...]


class CorpusEntry(NamedTuple):
    series: TimeSeries
    label: bool
    pattern: str
    group: str
    params: dict
    seed: int


def default_corpus_spec(per_pattern: int = 30) -> tuple[CorpusGroup, ...]:
    """Default corpus: per leak pattern, `per_pattern` positives and as many
    matched negatives (180 series at the default 30)."""
    return (
        CorpusGroup(
            "linear",
            (
                PatternSpec(
                    "linear",
                    per_pattern,
                    {"base": (15, 35), "end_level": (88, 97), "onset_frac": (0.66, 0.75)},
                ),
                PatternSpec(
                    "flat_noise",
                    per_pattern - per_pattern // 3,
                    {"level": (20, 50), "sigma": (0.2, 0.8)},
                ),
                PatternSpec(
                    "plateau_ramp_history",
                    per_pattern // 3,
                    {"base": (18, 28), "peak": (70, 85)},
                ),
            ),
        ),
        CorpusGroup(
            "linear_noise",
            (
                PatternSpec(
                    "linear_noise",
                    per_pattern,
                    {
                        "base": (15, 35),
                        "end_level": (88, 97),
                        "onset_frac": (0.66, 0.75),
                        "sigma": (0.4, 1.2),
                    },
                ),
                PatternSpec(
                    "flat_noise", per_pattern, {"level": (20, 50), "sigma": (0.5, 1.5)}
                ),
            ),
        ),
        CorpusGroup(
            "sawtooth",
            (
                PatternSpec(
                    "sawtooth",
                    per_pattern,
                    {
                        "base": (10, 20),
                        "rise": (12, 18),
                        "drop_fraction": (0.55, 0.75),
                        "period_days": (0.5, 0.75),
                        "period_growth": (0.03, 0.07),
                        "rise_growth": (0.06, 0.12),
                    },
                ),
                PatternSpec(
                    "stable_periodic",
                    per_pattern,
                    {
                        "level": (35, 60),
                        "amplitude": (6, 15),
                        "period_days": (0.4, 1.0),
                        "sigma": (0.0, 0.3),
                    },
                ),
            ),
        ),
    )


def generate_corpus(
    spec: tuple[CorpusGroup, ...] | None = None, seed: int = 42, days: float = 5.0
) -> list[CorpusEntry]:
    """Generate a deterministic labeled corpus from a corpus spec.

    Per-series parameters are drawn uniformly from each PatternSpec's ranges
    using a master generator seeded with `seed`; each series then gets its
    own child seed, all recorded in the returned entries so any single
    series can be regenerated bit-identically.
    """
    groups = default_corpus_spec() if spec is None else tuple(spec)
    if not groups or sum(m.count for g in groups for m in g.members) == 0:
        raise InvalidParams("corpus spec has no series to generate")
    for group in groups:
        for member in group.members:
            if member.count < 0:
                raise InvalidParams(f"negative count for pattern {member.pattern!r}")
            if member.pattern not in _GENERATORS:
                raise InvalidParams(f"unknown pattern {member.pattern!r}")

    rng = np.random.default_rng(seed)
    entries = []
    for group in groups:
        for member in group.members:
            for _ in range(member.count):
                params = {
                    key: float(rng.uniform(lo, hi))
                    for key, (lo, hi) in sorted(member.ranges.items())
                }
                child_seed = int(rng.integers(0, 2**31 - 1))
                series, label = generate(member.pattern, params, seed=child_seed, days=days)
                entries.append(
                    CorpusEntry(series, label, member.pattern, group.name, params, child_seed)
                )
    return entries
