import numpy as np

from plmc.core.potential import load_logistic_csv
from plmc.scripts.make_logistic_data import main


def test_writes_loadable_data(tmp_path, capsys):
    path = tmp_path / "data" / "logistic.csv"
    assert main([str(path), "--n-samples", "30", "--dim", "3", "--seed", "4"]) == 0
    features, labels = load_logistic_csv(path)
    assert features.shape == (30, 3)
    assert set(np.unique(labels)) <= {-1.0, 1.0}
    assert "Wrote 30 rows with 3 features" in capsys.readouterr().out


def test_same_seed_same_file(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    main([str(first), "--seed", "9"])
    main([str(second), "--seed", "9"])
    assert first.read_bytes() == second.read_bytes()


def test_environment_defaults(tmp_path, monkeypatch):
    monkeypatch.setenv("PLMC_LOGISTIC_SAMPLES", "12")
    monkeypatch.setenv("PLMC_LOGISTIC_DIM", "not-a-number")
    path = tmp_path / "env.csv"
    assert main([str(path)]) == 0
    features, _ = load_logistic_csv(path)
    assert features.shape == (12, 2)


def test_invalid_sizes_fail(tmp_path, capsys):
    assert main([str(tmp_path / "x.csv"), "--n-samples", "0"]) == 1
    assert "Could not generate data" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()
