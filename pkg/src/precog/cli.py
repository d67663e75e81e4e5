"""Command-line front end: generate, train, detect, evaluate, bench.

CSV in/out uses a `timestamp,value` header; timestamps are epoch seconds or
RFC 3339 strings (auto-detected per file, no mixing), values are percent.
One series per file. Exit codes: 0 success / no leak, 2 leak detected,
64 usage, 65 bad data, 74 I/O, 78 config.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .core import (
    ConfigMismatch,
    EmptyInput,
    EmptySeries,
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
    ValueOutOfRange,
    load_model,
    save_model,
    validate_series,
)
from .detector import detect, train
from .evaluate import Metrics, classify_corpus, score_corpus, sweep
from .preprocess import preprocess
from .synth import PATTERNS, CorpusEntry, default_corpus_spec, generate, generate_corpus

EX_OK = 0
EX_LEAK = 2
EX_USAGE = 64
EX_DATAERR = 65
EX_IOERR = 74
EX_CONFIG = 78

_DATA_ERRORS = (
    ParseError,
    EmptySeries,
    NonMonotonicTimestamps,
    ValueOutOfRange,
    SeriesTooShort,
    SegmentTooShort,
)
_USAGE_ERRORS = (InvalidParams, InvalidSizes, EmptyInput)
_CONFIG_ERRORS = (ConfigMismatch, SchemaMismatch)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _parse_timestamp(raw: str, lineno: int, mode: list) -> float:
    """Parse one timestamp cell, pinning the file to epoch or RFC 3339."""
    try:
        value = float(raw)
        kind = "epoch"
    except ValueError:
        try:
            dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
        except ValueError:
            raise ParseError(f"line {lineno}: unparseable timestamp {raw!r}") from None
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        value = dt.timestamp()
        kind = "rfc3339"
    if not mode:
        mode.append(kind)
    elif mode[0] != kind:
        raise ParseError(
            f"line {lineno}: {kind} timestamp in a file that started with {mode[0]}"
        )
    return value


def read_series_csv(path) -> TimeSeries:
    """Read and validate one `timestamp,value` series file."""
    timestamps = []
    values = []
    mode: list = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if [c.strip().lower() for c in header] != ["timestamp", "value"]:
            raise ParseError(f"{path}: line 1: expected header 'timestamp,value'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}: line {lineno}: expected 2 columns, got {len(row)}")
            timestamps.append(_parse_timestamp(row[0].strip(), lineno, mode))
            try:
                values.append(float(row[1]))
            except ValueError:
                raise ParseError(
                    f"{path}: line {lineno}: unparseable value {row[1]!r}"
                ) from None
    if not timestamps:
        raise ParseError(f"{path}: no data rows")
    return validate_series(TimeSeries(np.array(timestamps), np.array(values)))


def _format_number(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def write_series_csv(path, ts: TimeSeries, mask: np.ndarray | None = None) -> None:
    header = "timestamp,value" + (",anomalous" if mask is not None else "")
    lines = [header]
    for i in range(len(ts)):
        row = f"{_format_number(ts.timestamps[i])},{_format_number(ts.values[i])}"
        if mask is not None:
            row += f",{int(mask[i])}"
        lines.append(row)
    Path(path).write_text("\n".join(lines) + "\n")


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _add_config_flags(parser) -> None:
    group = parser.add_argument_group("detector configuration")
    group.add_argument("--threshold-u", type=float, default=100.0, help="utilization ceiling, percent")
    group.add_argument("--critical-days", type=float, default=7.0, help="critical time, days")
    group.add_argument("--resample-mins", type=float, default=5.0, help="resampling resolution, minutes")
    group.add_argument("--smooth-mins", type=float, default=60.0, help="median smoothing window, minutes")
    group.add_argument("--r2-min", type=float, default=0.75, help="minimum R2 for a good fit")
    group.add_argument("--z-threshold", type=float, default=3.0, help="change-point z-score threshold")
    group.add_argument("--min-segment-points", type=int, default=5, help="minimum points per fitted segment")
    group.add_argument("--train-fraction", type=float, default=0.65, help="training split fraction")


def _config_from_args(args) -> PrecogConfig:
    return PrecogConfig(
        threshold_u=args.threshold_u,
        critical_time=args.critical_days * 86400.0,
        resample_resolution=args.resample_mins * 60.0,
        smoothing_window=args.smooth_mins * 60.0,
        r2_min=args.r2_min,
        cpd_z_threshold=args.z_threshold,
        min_segment_points=args.min_segment_points,
        train_fraction=args.train_fraction,
    )


def _write_corpus(entries: list[CorpusEntry], out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    labels = {}
    by_pattern: dict[str, int] = {}
    for entry in entries:
        index = by_pattern.get(entry.pattern, 0)
        by_pattern[entry.pattern] = index + 1
        name = f"{entry.group}__{entry.pattern}_{index:03d}.csv"
        write_series_csv(out_dir / name, entry.series)
        labels[name] = {
            "label": entry.label,
            "pattern": entry.pattern,
            "group": entry.group,
            "params": entry.params,
            "seed": entry.seed,
        }
    _write_json(out_dir / "labels.json", labels)


def _cmd_generate(args) -> int:
    out_dir = Path(args.out_dir)
    if args.pattern == "all":
        entries = generate_corpus(default_corpus_spec(args.count), seed=args.seed, days=args.days)
    else:
        rng = np.random.default_rng(args.seed)
        entries = []
        for _ in range(args.count):
            child_seed = int(rng.integers(0, 2**31 - 1))
            series, label = generate(args.pattern, None, seed=child_seed, days=args.days)
            entries.append(CorpusEntry(series, label, args.pattern, args.pattern, {}, child_seed))
        if not entries:
            raise InvalidParams("--count must be at least 1")
    _write_corpus(entries, out_dir)
    print(f"wrote {len(entries)} series + labels.json to {out_dir}")
    return EX_OK


def _cmd_train(args) -> int:
    cfg = _config_from_args(args)
    series = read_series_csv(args.input)
    model = train(preprocess(series, cfg), cfg)
    save_model(model, args.model_out)
    print(f"saved model with {len(model.trends)} trend(s) to {args.model_out}")
    return EX_OK


def _cmd_detect(args) -> int:
    cfg = _config_from_args(args)
    series = read_series_csv(args.input)
    model = load_model(args.model)
    pre = preprocess(series, cfg)
    result = detect(pre, model, cfg)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_series_csv(out_dir / "detection_points.csv", pre, mask=result.mask)
    _write_json(
        out_dir / "detection_summary.json",
        {
            "is_leaking": result.is_leaking,
            "points": len(pre),
            "windows": [
                {
                    "start_index": w.start_index,
                    "end_index": w.end_index,
                    "start_timestamp": float(pre.timestamps[w.start_index]),
                    "end_timestamp": float(pre.timestamps[w.end_index]),
                    "slope_pct_per_s": w.slope,
                    "exit_time_s": w.exit_time,
                }
                for w in result.windows
            ],
        },
    )
    verdict = "LEAK" if result.is_leaking else "no leak"
    print(f"{verdict}: {len(result.windows)} anomalous window(s); report in {out_dir}")
    return EX_LEAK if result.is_leaking else EX_OK


def _metrics_dict(m: Metrics) -> dict:
    return {
        "precision": m.precision,
        "recall": m.recall,
        "f1": m.f1,
        "tp": m.tp,
        "fp": m.fp,
        "tn": m.tn,
        "fn": m.fn,
    }


def _cmd_evaluate(args) -> int:
    cfg = _config_from_args(args)
    corpus_dir = Path(args.corpus_dir)
    labels_path = corpus_dir / "labels.json"
    try:
        labels = json.loads(labels_path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{labels_path}: {exc}") from None

    corpus = []
    for name in sorted(labels):
        meta = labels[name]
        corpus.append(
            CorpusEntry(
                read_series_csv(corpus_dir / name),
                bool(meta["label"]),
                meta.get("pattern", "unknown"),
                meta.get("group", meta.get("pattern", "unknown")),
                meta.get("params", {}),
                int(meta.get("seed", 0)),
            )
        )
    out_dir = Path(args.out_dir) if args.out_dir else corpus_dir

    if args.sweep:
        parameter, _, raw_values = args.sweep.partition("=")
        try:
            values = [float(v) for v in raw_values.split(",") if v]
        except ValueError:
            raise InvalidParams(f"bad sweep values {raw_values!r}") from None
        rows = sweep(corpus, parameter.strip(), values, cfg)
        lines = ["parameter,value,f1"]
        for value, f1 in rows:
            print(f"{parameter}={value:g}: f1={f1:.3f}")
            lines.append(f"{parameter},{_format_number(value)},{repr(f1)}")
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "sweep_results.csv").write_text("\n".join(lines) + "\n")
        return EX_OK

    results = classify_corpus(corpus, cfg)
    overall = score_corpus(results)
    groups = sorted({entry.group for entry in corpus})
    per_group = {
        name: score_corpus(
            [(p, l) for (p, l), e in zip(results, corpus) if e.group == name]
        )
        for name in groups
    }

    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["file,group,pattern,label,predicted"]
    for (predicted, label), entry, name in zip(results, corpus, sorted(labels)):
        lines.append(f"{name},{entry.group},{entry.pattern},{int(label)},{int(predicted)}")
    (out_dir / "evaluation_results.csv").write_text("\n".join(lines) + "\n")
    _write_json(
        out_dir / "evaluation_summary.json",
        {
            "config": asdict(cfg),
            "overall": _metrics_dict(overall),
            "groups": {name: _metrics_dict(m) for name, m in per_group.items()},
        },
    )
    for name, m in per_group.items():
        print(f"{name}: precision={m.precision:.3f} recall={m.recall:.3f} f1={m.f1:.3f}")
    print(
        f"overall: precision={overall.precision:.3f} recall={overall.recall:.3f} "
        f"f1={overall.f1:.3f} ({overall.count} series)"
    )
    return EX_OK


def _cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise InvalidSizes(f"bad size list {args.sizes!r}") from None
    rows = bench_mod.bench_scaling(sizes, repetitions=args.reps, seed=args.seed)
    lines = ["size,train_ms,predict_ms"]
    for row in rows:
        print(f"{row.size}: train {row.train_s * 1e3:.1f} ms, predict {row.predict_s * 1e3:.1f} ms")
        lines.append(f"{row.size},{row.train_s * 1e3:.3f},{row.predict_s * 1e3:.3f}")
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="precog", description="Online memory-leak detection from VM memory-utilization series")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[], help="generate synthetic series")
    p.add_argument("--pattern", choices=PATTERNS + ("all",), default="all")
    p.add_argument("--count", type=int, default=30, help="series per pattern (or per corpus slot)")
    p.add_argument("--days", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("train", help="mine historic trends from one series CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--model-out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("detect", help="detect leaks in one series CSV against a model")
    p.add_argument("--input", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="output directory for the report")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("evaluate", help="score a labeled corpus directory")
    p.add_argument("--corpus-dir", required=True)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--sweep", default=None, metavar="PARAM=V1,V2,...", help="sweep r2_min or critical_time")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("bench", help="time train/detect scaling vs series length")
    p.add_argument("--sizes", required=True, help="comma-separated point counts, ascending")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="optional CSV output path")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"precog: {exc}", file=sys.stderr)
        return EX_USAGE
    except _DATA_ERRORS as exc:
        print(f"precog: {exc}", file=sys.stderr)
        return EX_DATAERR
    except _CONFIG_ERRORS as exc:
        print(f"precog: {exc}", file=sys.stderr)
        return EX_CONFIG
    except OSError as exc:
        print(f"precog: {exc}", file=sys.stderr)
        return EX_IOERR


if __name__ == "__main__":
    sys.exit(main())
