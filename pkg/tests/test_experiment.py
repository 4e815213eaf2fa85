import json

import pytest

from ratesched import ConfigError, ExperimentConfig, emit_results, run_experiment
from ratesched.cli import main
from ratesched.experiment import RESULT_COLUMNS, subseed

HEADER = ",".join(RESULT_COLUMNS)


def tiny_config(**overrides):
    base = {
        "n_sensors": [2, 3],
        "n_controllers": 3,
        "density": 5.0,
        "seeds": 3,
        "master_seed": 7,
        "rate_models": ["cont", "disc4", "disc8"],
        "strategies": ["sna-mla", "sna-mua"],
    }
    base.update(overrides)
    return ExperimentConfig.from_dict(base)


class TestSubseed:
    def test_deterministic(self):
        assert subseed(1, 2, 3, 4) == subseed(1, 2, 3, 4)

    def test_distinct_roles(self):
        seeds = {subseed(1, 0, 0, r) for r in range(4)}
        assert len(seeds) == 4


class TestConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            ExperimentConfig.from_dict({"n_sensor": 4})

    def test_double_sweep_rejected(self):
        with pytest.raises(ConfigError, match="only one"):
            ExperimentConfig.from_dict({"n_sensors": [2, 3], "density": [1.0, 2.0]})

    def test_unknown_model_rejected(self):
        with pytest.raises(ConfigError, match="rate model"):
            ExperimentConfig.from_dict({"rate_models": ["disc16"]})

    def test_bad_delay_rule_rejected(self):
        with pytest.raises(ConfigError, match="delay_rule"):
            ExperimentConfig.from_dict({"delay_rule": "whenever"})

    def test_sweep_resolution(self):
        assert tiny_config().sweep() == ("n_sensors", [2, 3])
        cfg = tiny_config(n_sensors=4, density=[1.0, 5.0])
        assert cfg.sweep() == ("density", [1.0, 5.0])
        cfg = tiny_config(n_sensors=4)
        assert cfg.sweep() == ("n_sensors", [4])


class TestRunExperiment:
    def test_row_structure_and_accounting(self):
        cfg = tiny_config()
        results = run_experiment(cfg)
        assert len(results.rows) == 2 * 2 * 3
        for row in results.rows:
            assert tuple(row) == RESULT_COLUMNS
            assert row["seed_count"] + row["infeasible_count"] == cfg.seeds
        counted = results.reference_counts[("n_sensors", 2)]
        assert counted["exhaustive"] + counted["heuristic"] + counted["infeasible"] == cfg.seeds

    def test_normalized_at_least_one_against_exhaustive_reference(self):
        results = run_experiment(tiny_config(seeds=5))
        for record in results.per_seed:
            if record["reference_kind"] != "exhaustive":
                continue
            for value in record["max_active"].values():
                assert value / record["reference"] >= 1.0

    def test_exhaustive_guard_zero_forces_heuristic_reference(self):
        results = run_experiment(tiny_config(exhaustive_guard=0))
        for counts in results.reference_counts.values():
            assert counts["exhaustive"] == 0

    def test_single_node_normalization(self):
        # one node: the discrete solo slot divided by the continuous optimum
        results = run_experiment(tiny_config(n_sensors=1, seeds=4))
        for row in results.rows:
            if row["seed_count"] and row["rate_model"] != "cont":
                assert row["mean_norm"] >= 1.0

    def test_seeded_sweep_regression_pin(self):
        # frozen output of this exact seeded run; any drift in the generator
        # chain, scheduling, or aggregation shows up here first
        results = run_experiment(tiny_config(n_sensors=[4], seeds=20, master_seed=123))
        expected = {
            ("sna-mla", "cont"): (12, 1.0, 0.0),
            ("sna-mla", "disc4"): (12, 1.3360246191894796, 0.14013030114706015),
            ("sna-mla", "disc8"): (12, 1.1169435286413683, 0.11359512189399382),
            ("sna-mua", "cont"): (12, 1.0, 0.0),
            ("sna-mua", "disc4"): (12, 1.3360246191894796, 0.14013030114706015),
            ("sna-mua", "disc8"): (12, 1.124409303771866, 0.11945731087628343),
        }
        assert len(results.rows) == len(expected)
        for row in results.rows:
            count, mean, std = expected[(row["strategy"], row["rate_model"])]
            assert row["seed_count"] == count
            assert row["mean_norm"] == pytest.approx(mean, rel=1e-9)
            assert row["std_norm"] == pytest.approx(std, rel=1e-9)


class TestEmitResults:
    def test_csv_header_and_determinism(self, tmp_path):
        cfg = tiny_config(seeds=2)
        paths = []
        for run in range(2):
            out = tmp_path / f"r{run}.csv"
            emit_results(run_experiment(cfg), out)
            paths.append(out)
        first = paths[0].read_bytes()
        assert first == paths[1].read_bytes()
        assert first.decode().splitlines()[0] == HEADER

    def test_json_round_trip(self, tmp_path):
        cfg = tiny_config(seeds=2, n_sensors=[2])
        results = run_experiment(cfg)
        out = tmp_path / "r.json"
        emit_results(results, out, fmt="json")
        loaded = json.loads(out.read_text())
        assert loaded == [{c: row[c] for c in RESULT_COLUMNS} for row in results.rows]

    def test_empty_rows_give_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        emit_results([], out)
        assert out.read_text().splitlines() == [HEADER]

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            emit_results([], tmp_path / "x.bin", fmt="parquet")


class TestCli:
    def write_config(self, tmp_path, doc):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        return str(path)

    def test_successful_run(self, tmp_path, capsys):
        cfg = self.write_config(
            tmp_path, {"n_sensors": 2, "seeds": 2, "master_seed": 3}
        )
        out = tmp_path / "results.csv"
        assert main(["--config", cfg, "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == HEADER

    def test_bad_config_exits_2(self, tmp_path):
        cfg = self.write_config(tmp_path, {"bogus_key": 1})
        assert main(["--config", cfg, "--out", str(tmp_path / "x.csv")]) == 2

    def test_unreadable_config_exits_2(self, tmp_path):
        missing = str(tmp_path / "nope.json")
        assert main(["--config", missing, "--out", str(tmp_path / "x.csv")]) == 2

    def test_all_infeasible_exits_3(self, tmp_path):
        # a kilowatt of receiver noise makes every link unusable
        cfg = self.write_config(
            tmp_path,
            {"n_sensors": 2, "seeds": 2, "radio": {"noise_power": 1000.0}},
        )
        assert main(["--config", cfg, "--out", str(tmp_path / "x.csv")]) == 3

    def test_seed_flag_changes_output(self, tmp_path):
        cfg = self.write_config(tmp_path, {"n_sensors": 3, "seeds": 2})
        out_a, out_b, out_c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        assert main(["--config", cfg, "--out", str(out_a), "--seed", "1"]) == 0
        assert main(["--config", cfg, "--out", str(out_b), "--seed", "2"]) == 0
        assert main(["--config", cfg, "--out", str(out_c), "--seed", "1"]) == 0
        assert out_a.read_bytes() != out_b.read_bytes()
        assert out_a.read_bytes() == out_c.read_bytes()

    def test_json_format_flag(self, tmp_path):
        cfg = self.write_config(tmp_path, {"n_sensors": 2, "seeds": 1})
        out = tmp_path / "results.json"
        assert main(["--config", cfg, "--out", str(out), "--format", "json"]) == 0
        assert isinstance(json.loads(out.read_text()), list)
