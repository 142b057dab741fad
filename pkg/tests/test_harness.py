import json

import numpy as np
import pytest

from georegret import GeometryError
from georegret.harness import CSV_HEADER, RunConfig, run, run_config_from_json


def _read(path):
    with open(path) as fh:
        return fh.read()


class TestRunConfig:
    def test_from_json_roundtrip(self):
        cfg = run_config_from_json(
            {
                "scenario": "drifting_mean",
                "T": 50,
                "seed": 3,
                "delta": 0.1,
                "algorithm": "hedge",
                "tuning_mode": "adaptive",
            }
        )
        assert cfg.algorithm == "hedge"
        assert cfg.tuning_mode == "adaptive"
        assert cfg.scenario["T"] == 50

    def test_rejects_unknown_algorithm(self):
        with pytest.raises(GeometryError):
            RunConfig(scenario={}, algorithm="sgd")

    def test_rejects_unknown_tuning(self):
        with pytest.raises(GeometryError):
            RunConfig(scenario={}, algorithm="ogd", tuning_mode="magic")


class TestDeterminism:
    def test_same_seed_byte_identical_csv(self, tmp_path):
        cfg = RunConfig(
            scenario={"scenario": "drifting_mean", "T": 40, "seed": 5},
            algorithm="hedge",
        )
        a = run(cfg, out_dir=str(tmp_path / "a"))[0]
        b = run(cfg, out_dir=str(tmp_path / "b"))[0]
        assert _read(a.csv_path) == _read(b.csv_path)

    def test_different_seed_differs(self, tmp_path):
        cfg = RunConfig(
            scenario={"scenario": "drifting_mean", "T": 40, "seed": 5},
            algorithm="hedge",
        )
        a = run(cfg, out_dir=str(tmp_path / "a"))[0]
        c = run(cfg, out_dir=str(tmp_path / "c"), seed=6)[0]
        assert _read(a.csv_path) != _read(c.csv_path)

    def test_reps_use_consecutive_seeds(self, tmp_path):
        cfg = RunConfig(
            scenario={"scenario": "drifting_mean", "T": 20, "seed": 0},
            algorithm="ogd",
        )
        results = run(cfg, out_dir=str(tmp_path), reps=3)
        seeds = [r.summary["seed"] for r in results]
        assert seeds == [0, 1, 2]


@pytest.fixture(scope="module")
def trace_result(tmp_path_factory):
    cfg = RunConfig(
        scenario={"scenario": "alternating", "T": 60, "seed": 2},
        algorithm="variation",
    )
    return run(cfg, out_dir=str(tmp_path_factory.mktemp("trace")))[0]


class TestTraceContract:
    @pytest.fixture
    def result(self, trace_result):
        return trace_result

    def test_csv_header(self, result):
        assert _read(result.csv_path).splitlines()[0] == CSV_HEADER

    def test_regret_column_consistent(self, result):
        # cumulative regret equals the recomputed sum of (loss - comp_loss)
        cum = 0.0
        for row in result.rows:
            t, loss, comp, cum_regret, *_ = row
            cum += loss - comp
            assert cum_regret == pytest.approx(cum, abs=1e-10)

    def test_monotone_accumulators(self, result):
        P = [row[4] for row in result.rows]
        F = [row[6] for row in result.rows]
        assert all(b >= a - 1e-12 for a, b in zip(P, P[1:]))
        assert all(b >= a - 1e-12 for a, b in zip(F, F[1:]))

    def test_summary_schema(self, result):
        s = result.summary
        assert s["schema"] == 1
        for key in ("final_regret", "P_T", "F_T", "constants", "seed", "T", "backend"):
            assert key in s
        assert s["confinement_fraction"] == 1.0
        assert "eta_grid" in s["constants"]
        assert s["constants"]["beta"] is not None  # oracle mode pins beta

    def test_json_parses(self, result):
        data = json.loads(_read(result.json_path))
        assert data["schema"] == 1


class TestBoundColumns:
    def test_ogd_bound_ok_every_round(self, tmp_path):
        cfg = RunConfig(
            scenario={"scenario": "drifting_mean", "T": 80, "seed": 1},
            algorithm="ogd",
        )
        result = run(cfg, out_dir=str(tmp_path))[0]
        for line in _read(result.csv_path).splitlines()[1:]:
            assert line.rsplit(",", 1)[1] == "true"

    def test_adaptive_mode_marks_bounds_na(self):
        cfg = RunConfig(
            scenario={"scenario": "drifting_mean", "T": 30, "seed": 1},
            algorithm="variation",
            tuning_mode="adaptive",
        )
        result = run(cfg)[0]
        assert all(row[8] is None for row in result.rows)

    def test_zero_loss_scenario_zero_regret(self):
        cfg = RunConfig(
            scenario={
                "scenario": "custom",
                "manifold": {"kind": "euclidean", "dim": 2},
                "decision_set": {"center": [0.0, 0.0], "radius": 1.0},
                "losses": [
                    {"name": "squared_distance", "anchors": [[0.0, 0.0]], "weights": [0.0]}
                ]
                * 5,
                "comparator": {"rule": "fixed_point", "point": [0.0, 0.0]},
            },
            algorithm="ogd",
            eta=0.1,
        )
        result = run(cfg)[0]
        assert all(row[3] == 0.0 for row in result.rows)


class TestGameRuns:
    def test_optimal_game_trace(self, tmp_path):
        cfg = RunConfig(
            scenario={
                "scenario": "adversarial_game",
                "T": 100,
                "seed": 0,
                "scenario_params": {"n": 3, "D": 2.0, "budgets": 1.0},
            },
            algorithm="ogd",  # ignored for game scenarios
        )
        result = run(cfg, out_dir=str(tmp_path))[0]
        assert result.summary["final_regret"] == pytest.approx(10.0, abs=1e-9)
        assert result.summary["game_value"] == pytest.approx(10.0)
        assert result.rows[-1][-1] is True

    def test_incompatibility_rejected(self):
        # horofunction losses declare no smoothness constant: the
        # smoothness-gated machines must refuse them
        cfg = RunConfig(
            scenario={
                "scenario": "custom",
                "manifold": {"kind": "diag_spd", "n": 3},
                "decision_set": {
                    "center": np.eye(3).tolist(),
                    "radius": 1.0,
                },
                "losses": [
                    {"name": "busemann", "direction": [1.0, 0.0, 0.0], "scale": 1.0}
                ],
                "comparator": {"rule": "fixed_point", "point": np.eye(3).tolist()},
            },
            algorithm="variation",
        )
        with pytest.raises(GeometryError):
            run(cfg)

    def test_busemann_with_ogd_runs(self):
        cfg = RunConfig(
            scenario={
                "scenario": "custom",
                "manifold": {"kind": "diag_spd", "n": 3},
                "decision_set": {"center": np.eye(3).tolist(), "radius": 1.0},
                "losses": [
                    {"name": "busemann", "direction": [1.0, 0.0, 0.0], "scale": 1.0},
                    {"name": "busemann", "direction": [0.0, 1.0, 0.0], "scale": 1.0},
                ],
                "comparator": {"rule": "fixed_point", "point": np.eye(3).tolist()},
            },
            algorithm="ogd",
            eta=0.1,
        )
        result = run(cfg)[0]
        assert len(result.rows) == 2
