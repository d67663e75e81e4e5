import dataclasses

import numpy as np
import pytest

from precog import (
    ClampWarning,
    EmptySeries,
    InvalidParams,
    NonMonotonicTimestamps,
    PrecogConfig,
    SchemaMismatch,
    TimeSeries,
    Trend,
    TrendModel,
    ValueOutOfRange,
    generate,
    load_model,
    preprocess,
    save_model,
    train,
    validate_series,
)

from conftest import make_series


class TestTimeSeries:
    def test_empty_rejected(self):
        with pytest.raises(EmptySeries):
            TimeSeries([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(InvalidParams):
            TimeSeries([0.0, 1.0], [5.0])

    def test_arrays_are_readonly(self):
        ts = make_series([1.0, 2.0])
        with pytest.raises(ValueError):
            ts.values[0] = 99.0

    def test_segment_is_inclusive(self):
        ts = make_series([1.0, 2.0, 3.0, 4.0])
        seg = ts.segment(1, 2)
        assert list(seg.values) == [2.0, 3.0]


class TestValidateSeries:
    def test_valid_series_unchanged(self):
        ts = TimeSeries([0.0, 60.0], [50.0, 51.0])
        out = validate_series(ts)
        assert np.array_equal(out.timestamps, ts.timestamps)
        assert np.array_equal(out.values, ts.values)

    def test_duplicate_timestamp_rejected(self):
        with pytest.raises(NonMonotonicTimestamps):
            validate_series(TimeSeries([0.0, 0.0], [50.0, 51.0]))

    def test_decreasing_timestamp_rejected(self):
        with pytest.raises(NonMonotonicTimestamps):
            validate_series(TimeSeries([60.0, 0.0], [50.0, 51.0]))

    def test_slight_overshoot_clamped_with_warning(self):
        ts = TimeSeries([0.0, 60.0], [50.0, 100.3])
        with pytest.warns(ClampWarning) as record:
            out = validate_series(ts)
        assert len(record) == 1
        assert list(out.values) == [50.0, 100.0]

    def test_slight_undershoot_clamped(self):
        with pytest.warns(ClampWarning):
            out = validate_series(TimeSeries([0.0, 60.0], [-0.2, 40.0]))
        assert list(out.values) == [0.0, 40.0]

    @pytest.mark.parametrize("bad", [100.6, -0.6, 150.0])
    def test_far_out_of_range_rejected(self, bad):
        with pytest.raises(ValueOutOfRange) as exc:
            validate_series(TimeSeries([0.0, 60.0], [40.0, bad]))
        assert exc.value.index == 1

    def test_idempotent(self):
        with pytest.warns(ClampWarning):
            once = validate_series(TimeSeries([0.0, 60.0], [50.0, 100.4]))
        twice = validate_series(once)
        assert np.array_equal(once.values, twice.values)


class TestConfig:
    def test_defaults(self):
        cfg = PrecogConfig()
        assert cfg.threshold_u == 100.0
        assert cfg.critical_time == 7 * 86400.0
        assert cfg.resample_resolution == 300.0
        assert cfg.smoothing_window == 3600.0
        assert cfg.r2_min == 0.75
        assert cfg.train_fraction == 0.65

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"threshold_u": 0.0},
            {"threshold_u": 120.0},
            {"critical_time": -1.0},
            {"resample_resolution": 0.0},
            {"smoothing_window": 100.0},  # below resolution
            {"r2_min": 0.0},
            {"r2_min": 1.5},
            {"cpd_z_threshold": 0.0},
            {"min_segment_points": 2},
            {"train_fraction": 1.0},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(InvalidParams):
            PrecogConfig(**kwargs)


class TestModelPersistence:
    def test_empty_model_roundtrip(self, tmp_path):
        model = TrendModel(trends=(), d_max=0.0, s_max=0.0, config_echo=PrecogConfig())
        path = tmp_path / "model.json"
        save_model(model, path)
        assert load_model(path) == model

    def test_trained_model_roundtrip(self, tmp_path):
        # a sawtooth gives a model with several mined trends
        series, _ = generate("sawtooth", None, seed=3)
        cfg = PrecogConfig()
        model = train(preprocess(series, cfg), cfg)
        assert len(model.trends) >= 3
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded == model
        assert loaded.trends == model.trends
        assert (loaded.d_max, loaded.s_max) == (model.d_max, model.s_max)
        assert loaded.config_echo == dataclasses.replace(cfg)

    def test_unknown_schema_version_rejected(self, tmp_path):
        model = TrendModel(trends=(), d_max=0.0, s_max=0.0, config_echo=PrecogConfig())
        path = tmp_path / "model.json"
        save_model(model, path)
        import json

        data = json.loads(path.read_text())
        data["schema_version"] = 999
        path.write_text(json.dumps(data))
        with pytest.raises(SchemaMismatch):
            load_model(path)

    def test_model_invariant_dmax_smax_from_saved_trend(self):
        series, _ = generate("sawtooth", None, seed=3)
        cfg = PrecogConfig()
        model = train(preprocess(series, cfg), cfg)
        assert all(tr.slope > 0 for tr in model.trends)
        assert (model.d_max, model.s_max) in [tuple(tr) for tr in model.trends]
        assert not any(
            tr.duration > model.d_max and tr.slope > model.s_max for tr in model.trends
        )
