import csv

import numpy as np
import pytest

from rkaczmarz.cli import main
from rkaczmarz.formats import read_matrix, write_matrix, write_vector
from rkaczmarz.generators import EnsembleSpec, gen_gaussian


def _kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


class TestGenerate:
    def test_round_trip(self, tmp_path):
        out = tmp_path / "a.rkmat"
        assert main(["generate", "--kind", "gaussian", "--m", "20", "--n", "5", "--seed", "7", "--out", str(out)]) == 0
        assert np.array_equal(read_matrix(out), gen_gaussian(EnsembleSpec("gaussian", 20, 5, seed=7)))

    def test_fourier_header(self, tmp_path):
        out = tmp_path / "f.rkmat"
        main(["generate", "--kind", "fourier", "--m", "700", "--n", "101", "--out", str(out)])
        with open(out) as fh:
            assert fh.readline().strip() == "rkmat 1 complex 700 101"

    def test_even_fourier_rejected(self, tmp_path, capsys):
        code = main(["generate", "--kind", "fourier", "--m", "700", "--n", "100", "--out", str(tmp_path / "f")])
        err = capsys.readouterr().err
        assert code != 0 and len(err.strip().splitlines()) == 1 and "odd" in err
        assert not (tmp_path / "f").exists()

    def test_bad_kind(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "--kind", "sparse", "--m", "2", "--n", "1", "--out", "x"])
        assert exc.value.code != 0
        assert len(capsys.readouterr().err.strip().splitlines()) == 1


@pytest.mark.parametrize("sub", ["generate", "analyze", "solve", "experiment"])
def test_help(sub, capsys):
    with pytest.raises(SystemExit) as exc:
        main([sub, "--help"])
    assert exc.value.code == 0
    assert "usage" in capsys.readouterr().out


class TestAnalyze:
    def test_identity_without_noise(self, tmp_path, capsys):
        write_matrix(tmp_path / "i.rkmat", np.eye(5))
        assert main(["analyze", "--matrix", str(tmp_path / "i.rkmat")]) == 0
        kv = _kv(capsys.readouterr().out)
        assert list(kv) == ["sigma_min", "sigma_max", "kappa", "R", "gamma", "threshold"]
        assert (kv["R"], kv["gamma"], kv["threshold"]) == ("5", "0", "0")

    def test_identity_all_ones_noise(self, tmp_path, capsys):
        write_matrix(tmp_path / "i.rkmat", np.eye(100))
        write_vector(tmp_path / "r.rkvec", np.ones(100))
        main(["analyze", "--matrix", str(tmp_path / "i.rkmat"), "--noise", str(tmp_path / "r.rkvec")])
        assert _kv(capsys.readouterr().out)["threshold"] == "10"

    def test_rank_deficient(self, tmp_path, capsys):
        write_matrix(tmp_path / "s.rkmat", np.ones((4, 2)))
        code = main(["analyze", "--matrix", str(tmp_path / "s.rkmat")])
        assert code != 0
        assert _kv(capsys.readouterr().out)["rank_deficient"] == "true"

    def test_missing_file(self, tmp_path, capsys):
        assert main(["analyze", "--matrix", str(tmp_path / "none.rkmat")]) != 0
        assert capsys.readouterr().err.startswith("rkaczmarz: error:")


class TestSolve:
    def test_identity_cyclic(self, tmp_path, capsys):
        write_matrix(tmp_path / "i.rkmat", np.eye(2))
        write_vector(tmp_path / "b.rkvec", np.ones(2))
        out = tmp_path / "t.csv"
        args = ["solve", "--matrix", str(tmp_path / "i.rkmat"), "--rhs", str(tmp_path / "b.rkvec"),
                "--schedule", "cyclic", "--iters", "2", "--out", str(out)]
        assert main(args) == 0
        rows = list(csv.DictReader(open(out)))
        assert list(rows[0]) == ["trial", "iter", "error", "noisy_bound"]
        assert rows[-1]["iter"] == "2" and float(rows[-1]["error"]) == 0.0

    def test_noisy_gaussian_plateau_and_determinism(self, tmp_path, capsys):
        main(["generate", "--kind", "gaussian", "--m", "2000", "--n", "100", "--seed", "1",
              "--out", str(tmp_path / "g.rkmat")])
        runs = []
        for name in ("a.csv", "b.csv"):
            args = ["solve", "--matrix", str(tmp_path / "g.rkmat"), "--homogeneous", "--noise-norm", "0.02",
                    "--iters", "6000", "--record-every", "500", "--seed", "4", "--out", str(tmp_path / name)]
            assert main(args) == 0
            runs.append(_kv(capsys.readouterr().out))
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        rows = list(csv.DictReader(open(tmp_path / "a.csv")))
        assert len(rows) == 13
        threshold = float(runs[0]["threshold"])
        tail = [float(r["error"]) for r in rows[-4:]]
        assert max(tail) <= threshold
        assert float(rows[-1]["noisy_bound"]) == pytest.approx(threshold, rel=1e-4)

    def test_dimension_mismatch(self, tmp_path, capsys):
        write_matrix(tmp_path / "i.rkmat", np.eye(3))
        write_vector(tmp_path / "b.rkvec", np.ones(2))
        code = main(["solve", "--matrix", str(tmp_path / "i.rkmat"), "--rhs", str(tmp_path / "b.rkvec"),
                     "--out", str(tmp_path / "t.csv")])
        assert code != 0 and "length" in capsys.readouterr().err

    def test_zero_row(self, tmp_path, capsys):
        write_matrix(tmp_path / "z.rkmat", np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))
        code = main(["solve", "--matrix", str(tmp_path / "z.rkmat"), "--homogeneous",
                     "--out", str(tmp_path / "t.csv")])
        assert code != 0 and "zero" in capsys.readouterr().err

    def test_rhs_required(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["solve", "--matrix", "m", "--out", "o"])


class TestExperiment:
    def test_outputs(self, tmp_path, capsys):
        out = tmp_path / "run"
        args = ["experiment", "--kind", "gaussian", "--m", "200", "--n", "20", "--trials", "4",
                "--iters", "600", "--record-every", "50", "--out-dir", str(out)]
        assert main(args) == 0
        kv = _kv(capsys.readouterr().out)
        summary = list(csv.DictReader(open(out / "summary.csv")))
        traj = list(csv.DictReader(open(out / "trajectories.csv")))
        assert list(summary[0]) == ["trial", "R", "gamma", "threshold", "final_error"]
        assert list(traj[0]) == ["trial", "iter", "error", "noisy_bound"]
        assert len(summary) == 4 and len(traj) == 4 * (1 + 600 // 50)
        assert float(kv["mean_R"]) == pytest.approx(np.mean([float(r["R"]) for r in summary]), rel=1e-12)
        assert 0 <= float(kv["pass_fraction"]) <= 1
