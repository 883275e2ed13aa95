"""Monte Carlo harness: statistics, reproducibility, file formats."""

import json
import math

import numpy as np
import pytest

from codedetect import (
    ExperimentConfig,
    ExperimentRecord,
    estimate_empirical_exponent,
    export_dataset,
    run_montecarlo,
    wilson_interval,
    write_records_csv,
)
from codedetect.harness import config_from_dict


def small_config(code57, code45, **overrides):
    base = dict(
        code_pair=(code57, code45),
        epsilon_grid=(0.1,),
        n_grid=(16,),
        trials=400,
        seed=17,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestRunMontecarlo:
    def test_indistinguishable_at_half(self, code57, code45):
        cfg = small_config(code57, code45, epsilon_grid=(0.5,), trials=2000)
        (rec,) = run_montecarlo(cfg)
        sigma = math.sqrt(0.25 / cfg.trials)
        assert abs(rec.p_error_hat - 0.5) <= 3 * sigma

    def test_identical_codes_error_half(self, code57):
        # constant H1 decision against a uniform truth
        cfg = small_config(code57, code57, trials=2000)
        (rec,) = run_montecarlo(cfg)
        sigma = math.sqrt(0.25 / cfg.trials)
        assert abs(rec.p_error_hat - 0.5) <= 3 * sigma

    def test_record_bookkeeping(self, code57, code45):
        cfg = small_config(code57, code45)
        (rec,) = run_montecarlo(cfg)
        assert rec.trials == 400
        assert 0 <= rec.errors <= rec.trials
        assert rec.p_error_hat == rec.errors / rec.trials
        assert rec.underflows == 0
        assert rec.pair == "5,7|4,5"

    def test_worker_count_invariance(self, code57, code45):
        from dataclasses import replace

        cfg = small_config(code57, code45, epsilon_grid=(0.1, 0.3), n_grid=(8, 16), trials=150)
        one = [replace(r, wall_ms=0.0) for r in run_montecarlo(cfg, workers=1)]
        three = [replace(r, wall_ms=0.0) for r in run_montecarlo(cfg, workers=3)]
        assert one == three

    def test_grid_validation(self, code57, code45):
        with pytest.raises(ValueError):
            small_config(code57, code45, epsilon_grid=())
        with pytest.raises(ValueError):
            small_config(code57, code45, trials=0)
        with pytest.raises(ValueError):
            small_config(code57, code45, epsilon_grid=(0.7,))

    def test_ci_coverage_at_known_truth(self, code57, code45):
        # eps = 0.5 makes the true error rate exactly one half
        hits = 0
        for seed in range(100):
            cfg = small_config(code57, code45, epsilon_grid=(0.5,), n_grid=(8,), trials=300, seed=seed)
            (rec,) = run_montecarlo(cfg)
            lo, hi = wilson_interval(rec.errors, rec.trials)
            hits += lo <= 0.5 <= hi
        assert hits >= 90


class TestCsv:
    def test_byte_reproducible(self, tmp_path, code57, code45):
        cfg = small_config(code57, code45, epsilon_grid=(0.2, 0.1), n_grid=(8, 4), trials=100)
        paths = [tmp_path / f"{i}.csv" for i in range(2)]
        write_records_csv(run_montecarlo(cfg, workers=1), paths[0])
        write_records_csv(run_montecarlo(cfg, workers=2), paths[1])
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_schema(self, tmp_path, code57, code45):
        path = tmp_path / "out.csv"
        write_records_csv(run_montecarlo(small_config(code57, code45)), path)
        header, row = path.read_text().splitlines()
        assert header == "pair,eps,N,trials,errors,p_err,ci_half,underflows,wall_ms"
        assert row.endswith(",0")  # timing suppressed by default

    def test_timing_opt_in(self, tmp_path):
        rec = ExperimentRecord("p", 0.1, 8, 10, 2, 0.2, 0.1, 0, 123.456)
        write_records_csv([rec], tmp_path / "t.csv", timing=True)
        assert "123.456" in (tmp_path / "t.csv").read_text()


class TestDataset:
    def test_balance_and_shape(self, tmp_path, code57, code45):
        path = tmp_path / "ds.jsonl"
        cfg = small_config(code57, code45, n_grid=(12,))
        count = export_dataset(cfg, 50, path)
        lines = [json.loads(l) for l in path.read_text().splitlines()]
        assert count == len(lines) == 100
        labels = [l["label"] for l in lines]
        assert labels.count(0) == labels.count(1) == 50
        for line in lines:
            assert len(line["bits"]) == 12 * 2
            assert line["eps"] == 0.1
            assert line["n_steps"] == 12
            assert line["pair"] == "5,7|4,5"
            assert isinstance(line["seed"], int)

    def test_reexport_identical(self, tmp_path, code57, code45):
        cfg = small_config(code57, code45)
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        export_dataset(cfg, 20, a)
        export_dataset(cfg, 20, b)
        assert a.read_bytes() == b.read_bytes()

    def test_labels_honest(self, tmp_path, code57, code45):
        # eps = 0 samples must decode perfectly with the labeled code
        from codedetect import lrt_decide

        path = tmp_path / "clean.jsonl"
        cfg = small_config(code57, code45, epsilon_grid=(0.0,), n_grid=(24,))
        export_dataset(cfg, 10, path)
        for line in map(json.loads, path.read_text().splitlines()):
            result = lrt_decide(code57, code45, np.array(line["bits"]), 1e-9)
            assert result.decision == ("H1" if line["label"] == 0 else "H2")


class TestEmpiricalExponent:
    def test_recovers_exact_exponential(self):
        records = [
            ExperimentRecord("p", 0.1, n, 10**6, 1, math.exp(-0.01 * n), 0.0, 0, 0.0)
            for n in (100, 200, 300, 400)
        ]
        assert estimate_empirical_exponent(records) == pytest.approx(0.01, abs=1e-12)

    def test_needs_three_usable(self):
        records = [
            ExperimentRecord("p", 0.1, n, 100, e, e / 100, 0.0, 0, 0.0)
            for n, e in ((10, 30), (20, 9), (30, 0))
        ]
        with pytest.warns(UserWarning, match="zero errors"):
            with pytest.raises(ValueError, match="three"):
                estimate_empirical_exponent(records)

    def test_single_record(self):
        rec = ExperimentRecord("p", 0.1, 10, 100, 5, 0.05, 0.0, 0, 0.0)
        with pytest.raises(ValueError):
            estimate_empirical_exponent([rec])

    def test_mixed_epsilon_rejected(self):
        records = [
            ExperimentRecord("p", eps, n, 100, 10, 0.1, 0.0, 0, 0.0)
            for eps, n in ((0.1, 10), (0.2, 20), (0.2, 30))
        ]
        with pytest.raises(ValueError, match="epsilon"):
            estimate_empirical_exponent(records)


def test_config_from_dict_roundtrip():
    raw = {
        "code_pair": [
            {"generators": ["5", "7"], "k": 1},
            {"generators": ["4", "5"], "k": 1},
        ],
        "epsilon_grid": [0.05, 0.1],
        "N_grid": [25, 50],
        "trials": 123,
        "seed": 99,
        "mode": "unscaled",
    }
    cfg = config_from_dict(raw)
    assert cfg.trials == 123 and cfg.seed == 99 and cfg.mode == "unscaled"
    assert cfg.label == "5,7|4,5"
    assert len(cfg.cells()) == 4
