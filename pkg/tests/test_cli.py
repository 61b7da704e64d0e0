import csv
import json
from pathlib import Path

import numpy as np
import pytest

from greedyselect import model as model_mod
from greedyselect.cli import main
from greedyselect.model import (
    SyntheticSpec,
    from_matrices,
    from_samples,
    synth_generate,
    write_csv_table,
    write_model_json,
)


@pytest.fixture
def i3a_json(tmp_path):
    m = from_matrices(
        [[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [("z", [0.6, 0.5, 0.4])],
    )
    path = tmp_path / "i3a.json"
    write_model_json(m, path)
    return path


@pytest.fixture
def small_csv(tmp_path):
    table = synth_generate(SyntheticSpec(n=5, m=60, seed=12, runs=1))[0]
    path = tmp_path / "small.csv"
    write_csv_table(table, path)
    return path


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestFit:
    def test_reference_opt_column(self, i3a_json, tmp_path):
        out = tmp_path / "out"
        rc = main([
            "fit", "--model", str(i3a_json), "--target", "z",
            "--k-min", "1", "--k-max", "3", "--out-dir", str(out),
        ])
        assert rc == 0
        rows = read_rows(out / "r2_vs_k.csv")
        assert rows[0] == ["k", "fr", "omp", "obl", "opt"]
        opt = [float(r[4]) for r in rows[1:]]
        np.testing.assert_allclose(opt, [0.36, 0.52, 43 / 75], atol=1e-9)

    def test_missing_target_exits_2(self, i3a_json, tmp_path, capsys):
        rc = main([
            "fit", "--model", str(i3a_json), "--target", "MEDV",
            "--k-min", "1", "--k-max", "2", "--out-dir", str(tmp_path / "x"),
        ])
        assert rc == 2
        assert "MEDV" in capsys.readouterr().err

    def test_capped_marker(self, small_csv, tmp_path):
        out = tmp_path / "out"
        rc = main([
            "fit", "--input", str(small_csv), "--target", "z",
            "--k-min", "2", "--k-max", "3", "--cap", "5",
            "--out-dir", str(out),
        ])
        assert rc == 0
        rows = read_rows(out / "r2_vs_k.csv")
        assert {r[4] for r in rows[1:]} == {"capped"}
        report = json.loads((out / "report.json").read_text())
        assert report["rows"][0]["opt"] == "capped"

    def test_round_trip_csv_vs_exported_model(self, small_csv, tmp_path):
        table = model_mod.read_csv(small_csv)
        m = from_samples(table, ["z"])
        mpath = tmp_path / "model.json"
        write_model_json(m, mpath)
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        args = ["--target", "z", "--k-min", "1", "--k-max", "4"]
        assert main(["fit", "--input", str(small_csv), *args, "--out-dir", str(out_a)]) == 0
        assert main(["fit", "--model", str(mpath), *args, "--out-dir", str(out_b)]) == 0
        ra = read_rows(out_a / "r2_vs_k.csv")
        rb = read_rows(out_b / "r2_vs_k.csv")
        for row_a, row_b in zip(ra[1:], rb[1:]):
            for cell_a, cell_b in zip(row_a[1:], row_b[1:]):
                assert abs(float(cell_a) - float(cell_b)) <= 1e-9


class TestDiag:
    def test_diagonal_model(self, tmp_path):
        m = from_matrices(np.eye(4), [("z", [0.6, 0.5, 0.4, 0.3])])
        mpath = tmp_path / "diag.json"
        write_model_json(m, mpath)
        out = tmp_path / "out"
        rc = main([
            "diag", "--model", str(mpath), "--target", "z",
            "--k-min", "1", "--k-max", "2", "--out-dir", str(out),
        ])
        assert rc == 0
        rows = read_rows(out / "diagnostics.csv")
        for r in rows[1:]:
            assert float(r[1]) == pytest.approx(1.0, abs=1e-9)  # gamma
            assert float(r[3]) == pytest.approx(1.0, abs=1e-9)  # lam_min_k
            assert float(r[6]) == pytest.approx(1.0, abs=1e-9)  # inv kappa

    def test_suppressor_gamma(self, tmp_path):
        m = from_matrices([[1.0, 0.5], [0.5, 1.0]], [("z", [0.5, 0.0])])
        mpath = tmp_path / "i2b.json"
        write_model_json(m, mpath)
        out = tmp_path / "out"
        rc = main([
            "diag", "--model", str(mpath), "--target", "z",
            "--k-min", "2", "--k-max", "2", "--ratio", "exact",
            "--out-dir", str(out),
        ])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert report["rows"][0]["gamma"] == pytest.approx(0.75, abs=1e-9)

    def test_cap_falls_back_to_sampled(self, small_csv, tmp_path):
        out = tmp_path / "out"
        rc = main([
            "diag", "--input", str(small_csv), "--target", "z",
            "--k-min", "2", "--k-max", "2", "--ratio", "exact",
            "--cap", "4", "--trials", "50", "--seed", "5",
            "--out-dir", str(out),
        ])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert report["rows"][0]["gamma_mode"] == "sampled"
        assert report["rows"][0]["lam_min_2k_mode"] == "bound"


class TestDict:
    def test_opt_reference(self, i3a_json, tmp_path):
        out = tmp_path / "out"
        rc = main([
            "dict", "--model", str(i3a_json), "-d", "2", "-k", "2",
            "--algo", "opt", "--out-dir", str(out),
        ])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())
        assert report["dictionary"] == [0, 2]
        assert report["F"] == pytest.approx(0.52, abs=1e-9)

    def test_unknown_algo_exits_2(self, i3a_json, tmp_path):
        with pytest.raises(SystemExit) as err:
            main([
                "dict", "--model", str(i3a_json), "-d", "2", "-k", "2",
                "--algo", "nope", "--out-dir", str(tmp_path / "x"),
            ])
        assert err.value.code == 2

    def test_opt_over_cap_exits_3(self, i3a_json, tmp_path):
        rc = main([
            "dict", "--model", str(i3a_json), "-d", "2", "-k", "2",
            "--algo", "opt", "--cap", "1", "--out-dir", str(tmp_path / "x"),
        ])
        assert rc == 3


class TestSynth:
    def test_deterministic_outputs(self, tmp_path):
        args = [
            "synth", "--n", "5", "--m", "40", "--seed", "7", "--runs", "2",
            "--k-min", "2", "--k-max", "3",
        ]
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(args + ["--out-dir", str(out_a)]) == 0
        assert main(args + ["--out-dir", str(out_b)]) == 0
        assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()
        assert (out_a / "synth_mean_r2.csv").read_bytes() == (out_b / "synth_mean_r2.csv").read_bytes()

    def test_mean_curves_monotone(self, tmp_path):
        out = tmp_path / "out"
        rc = main([
            "synth", "--n", "6", "--m", "50", "--seed", "3", "--runs", "3",
            "--k-min", "1", "--k-max", "4", "--out-dir", str(out),
        ])
        assert rc == 0
        rows = read_rows(out / "synth_mean_r2.csv")
        for col in range(1, 5):
            vals = [float(r[col]) for r in rows[1:]]
            assert all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))

    def test_invalid_spec_exits_2(self, tmp_path):
        rc = main([
            "synth", "--rho", "1.5", "--out-dir", str(tmp_path / "x"),
        ])
        assert rc == 2

    def test_tables_dir(self, tmp_path):
        out = tmp_path / "out"
        tdir = tmp_path / "tables"
        rc = main([
            "synth", "--n", "4", "--m", "30", "--seed", "2", "--runs", "2",
            "--k-min", "1", "--k-max", "2",
            "--out-dir", str(out), "--tables-dir", str(tdir),
        ])
        assert rc == 0
        files = sorted(p.name for p in Path(tdir).iterdir())
        assert files == ["run000.csv", "run001.csv"]


def test_k_range_outside_n_exits_2(i3a_json, tmp_path, capsys):
    rc = main([
        "fit", "--model", str(i3a_json), "--target", "z",
        "--k-min", "2", "--k-max", "9", "--out-dir", str(tmp_path / "x"),
    ])
    assert rc == 2
    assert "k range" in capsys.readouterr().err


def test_csv_outputs_identical_across_thread_counts(small_csv, tmp_path, monkeypatch):
    args = ["fit", "--input", str(small_csv), "--target", "z",
            "--k-min", "2", "--k-max", "4"]
    outs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("GS_THREADS", threads)
        out = tmp_path / f"t{threads}"
        assert main(args + ["--out-dir", str(out)]) == 0
        outs.append((out / "r2_vs_k.csv").read_bytes())
    assert outs[0] == outs[1]


def test_requires_exactly_one_input(i3a_json, tmp_path, capsys):
    assert main(["fit", "--target", "z", "--out-dir", str(tmp_path)]) == 2
    assert main([
        "fit", "--model", str(i3a_json), "--input", str(i3a_json),
        "--target", "z", "--out-dir", str(tmp_path),
    ]) == 2
