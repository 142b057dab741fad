import json
import os

from georegret.cli import main


def test_run_command(tmp_path, capsys):
    cfg = {
        "scenario": "drifting_mean",
        "T": 30,
        "seed": 4,
        "algorithm": "ogd",
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    rc = main(["run", "--config", str(cfg_path), "--out", str(out_dir)])
    assert rc == 0
    files = sorted(os.listdir(out_dir))
    assert any(f.endswith(".csv") for f in files)
    assert any(f.endswith(".json") for f in files)
    assert "regret=" in capsys.readouterr().out


def test_run_with_reps_and_seed(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(
        json.dumps({"scenario": "drifting_mean", "T": 20, "algorithm": "hedge"})
    )
    out_dir = tmp_path / "out"
    rc = main(
        ["run", "--config", str(cfg_path), "--out", str(out_dir), "--seed", "9", "--reps", "2"]
    )
    assert rc == 0
    names = sorted(os.listdir(out_dir))
    assert any("seed9" in n for n in names)
    assert any("seed10" in n for n in names)


def test_adversarial_game_command(tmp_path, capsys):
    rc = main(
        [
            "adversarial-game",
            "--n", "3",
            "-T", "100",
            "--budget", "1.0",
            "--diameter", "2.0",
            "--out", str(tmp_path),
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "value   = 10" in out
    assert "regret  = 10" in out
    assert (tmp_path / "game_n3_T100.json").exists()


def test_adversarial_game_baseline_player(capsys):
    rc = main(["adversarial-game", "--n", "3", "-T", "50", "--player", "zero"])
    assert rc == 0


def test_unknown_player_rejected(capsys):
    rc = main(["adversarial-game", "--player", "cheater"])
    assert rc == 2
