"""Series-level scoring of detector output and parameter sweeps.

Each VM/series counts once: the detector's is_leaking verdict against the
ground-truth label. Precision, recall and F1 follow the usual binary
conventions, with undefined ratios mapped to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .core import EmptyInput, InvalidParams, PrecogConfig
from .detector import run_pipeline
from .synth import CorpusEntry

SWEEPABLE = ("r2_min", "critical_time")


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def count(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def score_corpus(results: Iterable[tuple[bool, bool]]) -> Metrics:
    """Score (predicted, label) pairs into precision/recall/F1 and counts."""
    tp = fp = tn = fn = 0
    for predicted, label in results:
        if predicted and label:
            tp += 1
        elif predicted and not label:
            fp += 1
        elif not predicted and label:
            fn += 1
        else:
            tn += 1
    if tp + fp + tn + fn == 0:
        raise EmptyInput("no results to score")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(precision, recall, f1, tp, fp, tn, fn)


def classify_corpus(
    corpus: Sequence[CorpusEntry], cfg: PrecogConfig | None = None
) -> list[tuple[bool, bool]]:
    """Run the full pipeline on every corpus entry; returns (predicted, label)."""
    cfg = cfg or PrecogConfig()
    out = []
    for entry in corpus:
        _, result = run_pipeline(entry.series, cfg)
        out.append((result.is_leaking, entry.label))
    return out


def sweep(
    corpus: Sequence[CorpusEntry],
    parameter: str,
    values: Sequence[float],
    cfg: PrecogConfig | None = None,
) -> list[tuple[float, float]]:
    """Re-run the pipeline for each parameter value; returns (value, f1) rows.

    Only r2_min and critical_time are sweepable; all other parameters stay
    at their configured values. Deterministic for a fixed corpus.
    """
    if parameter not in SWEEPABLE:
        raise InvalidParams(f"cannot sweep {parameter!r}; choose one of {SWEEPABLE}")
    if len(values) < 2:
        raise InvalidParams("a sweep needs at least 2 values")
    cfg = cfg or PrecogConfig()
    rows = []
    for value in values:
        variant = replace(cfg, **{parameter: value})
        metrics = score_corpus(classify_corpus(corpus, variant))
        rows.append((float(value), metrics.f1))
    return rows
