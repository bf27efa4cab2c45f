import json

import numpy as np
import pytest

from kernelkl import InvalidInputError
from kernelkl.cli import main
from kernelkl.datasets import read_csv_dataset, resolve_columns, write_csv_dataset

FAST = ["--max-iter", "200"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def gaussian_files(tmp_path):
    rng = np.random.default_rng(0)
    p = tmp_path / "p.csv"
    q = tmp_path / "q.csv"
    write_csv_dataset(p, ["x"], rng.normal(size=(2000, 1)))
    write_csv_dataset(q, ["x"], rng.normal(loc=1.0, size=(2000, 1)))
    return str(p), str(q)


@pytest.fixture()
def mi_file(tmp_path):
    code = main(["generate", "--dim", "1", "--rho", "0.8", "--n", "3000",
                 "--seed", "3", "--out", str(tmp_path / "pairs.csv")])
    assert code == 0
    return str(tmp_path / "pairs.csv")


class TestDatasets:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "d.csv"
        data = np.random.default_rng(1).normal(size=(10, 3))
        write_csv_dataset(path, ["a", "b", "c"], data)
        header, loaded = read_csv_dataset(path)
        assert header == ["a", "b", "c"]
        np.testing.assert_array_equal(loaded, data)

    def test_byte_determinism(self, tmp_path):
        data = np.random.default_rng(2).normal(size=(5, 2))
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv_dataset(p1, ["u", "v"], data)
        write_csv_dataset(p2, ["u", "v"], data)
        assert p1.read_bytes() == p2.read_bytes()

    def test_missing_file_cites_name(self, tmp_path):
        with pytest.raises(InvalidInputError, match="nonexistent.csv"):
            read_csv_dataset(str(tmp_path / "nonexistent.csv"))

    def test_malformed_cell_cites_row_and_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,2.0\n3.0,oops\n")
        with pytest.raises(InvalidInputError, match=r"row 3.*'b'.*'oops'"):
            read_csv_dataset(str(path))

    def test_ragged_row_rejected(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("a,b\n1.0\n")
        with pytest.raises(InvalidInputError, match="row 2"):
            read_csv_dataset(str(path))

    def test_resolve_by_name_and_index(self):
        assert resolve_columns(["x", "y", "z"], ["y", "0"], "--x-cols") == [1, 0]

    def test_resolve_unknown_name(self):
        with pytest.raises(InvalidInputError, match="--x-cols"):
            resolve_columns(["x", "y"], ["w"], "--x-cols")


class TestGenerate:
    def test_deterministic_bytes(self, tmp_path, capsys):
        args = ["generate", "--dim", "2", "--rho", "0.5", "--n", "50", "--seed", "7"]
        c1, _, _ = run_cli(capsys, *args, "--out", str(tmp_path / "a.csv"))
        c2, _, _ = run_cli(capsys, *args, "--out", str(tmp_path / "b.csv"))
        assert c1 == c2 == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_header_names(self, tmp_path, capsys):
        code, _, _ = run_cli(capsys, "generate", "--dim", "2", "--rho", "0.3",
                             "--n", "10", "--out", str(tmp_path / "g.csv"))
        assert code == 0
        header, data = read_csv_dataset(str(tmp_path / "g.csv"))
        assert header == ["x1", "x2", "y1", "y2"]
        assert data.shape == (10, 4)

    def test_invalid_rho_exit_one(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "generate", "--dim", "1", "--rho", "1.0",
                               "--n", "10", "--out", str(tmp_path / "g.csv"))
        assert code == 1
        assert "error:" in err


class TestEstimateKl:
    def test_text_output(self, gaussian_files, capsys):
        p, q = gaussian_files
        code, out, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q, *FAST)
        assert code == 0
        assert out.startswith("kl_divergence:")
        assert "nats" in out

    def test_json_output_and_value(self, gaussian_files, capsys):
        p, q = gaussian_files
        code, out, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q,
                               "--format", "json", "--seed", "1", *FAST)
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        assert payload["unit"] == "nats"
        # KL(N(0,1) || N(1,1)) = 0.5
        assert payload["value"] == pytest.approx(0.5, abs=0.15)

    def test_bits_conversion(self, gaussian_files, capsys):
        p, q = gaussian_files
        _, out_nats, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q,
                                 "--format", "json", "--seed", "1", *FAST)
        _, out_bits, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q,
                                 "--format", "json", "--seed", "1", "--bits", *FAST)
        nats = json.loads(out_nats)["value"]
        bits = json.loads(out_bits)["value"]
        assert bits == pytest.approx(nats / np.log(2.0))
        assert json.loads(out_bits)["unit"] == "bits"

    def test_seed_determinism_byte_identical(self, gaussian_files, capsys):
        p, q = gaussian_files
        _, out1, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q,
                             "--format", "json", "--seed", "5", *FAST)
        _, out2, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q,
                             "--format", "json", "--seed", "5", *FAST)
        assert out1 == out2

    def test_out_file(self, gaussian_files, tmp_path, capsys):
        p, q = gaussian_files
        dest = tmp_path / "result.json"
        code, out, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q,
                               "--format", "json", "--out", str(dest), *FAST)
        assert code == 0
        assert out == ""
        assert json.loads(dest.read_text())["quantity"] == "kl_divergence"

    def test_missing_file_exit_one(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "estimate-kl", "--p", str(tmp_path / "no.csv"),
                               "--q", str(tmp_path / "no.csv"))
        assert code == 1
        assert "no.csv" in err

    def test_dual_mode_accepted(self, tmp_path, capsys):
        rng = np.random.default_rng(4)
        p = tmp_path / "p.csv"
        q = tmp_path / "q.csv"
        write_csv_dataset(p, ["x"], rng.normal(size=(80, 1)))
        write_csv_dataset(q, ["x"], rng.normal(size=(80, 1)))
        code, out, _ = run_cli(capsys, "estimate-kl", "--p", str(p), "--q", str(q),
                               "--mode", "dual", "--step", "0.1", "--max-iter", "100")
        assert code == 0

    def test_explicit_bandwidth(self, gaussian_files, capsys):
        p, q = gaussian_files
        code, out, _ = run_cli(capsys, "estimate-kl", "--p", p, "--q", q,
                               "--bandwidth", "2.0", "--format", "json", *FAST)
        assert code == 0
        assert json.loads(out)["bandwidth"] == 2.0

    def test_bad_bandwidth_exit_one(self, gaussian_files, capsys):
        p, q = gaussian_files
        code, _, err = run_cli(capsys, "estimate-kl", "--p", p, "--q", q, "--bandwidth", "wide")
        assert code == 1
        assert "bandwidth" in err


class TestEstimateMi:
    def test_by_name_and_by_index_agree(self, mi_file, capsys):
        base = ["estimate-mi", "--data", mi_file, "--format", "json", "--seed", "2", *FAST]
        _, by_name, _ = run_cli(capsys, *base, "--x-cols", "x1", "--y-cols", "y1")
        _, by_index, _ = run_cli(capsys, *base, "--x-cols", "0", "--y-cols", "1")
        assert json.loads(by_name)["value"] == json.loads(by_index)["value"]

    def test_value_near_analytic(self, mi_file, capsys):
        code, out, _ = run_cli(capsys, "estimate-mi", "--data", mi_file,
                               "--x-cols", "x1", "--y-cols", "y1",
                               "--format", "json", "--seed", "2", *FAST)
        assert code == 0
        # I = -0.5 log(1 - 0.64) = 0.5108
        assert json.loads(out)["value"] == pytest.approx(0.5108, abs=0.1)

    def test_overlapping_columns_exit_one(self, mi_file, capsys):
        code, _, err = run_cli(capsys, "estimate-mi", "--data", mi_file,
                               "--x-cols", "x1", "--y-cols", "x1")
        assert code == 1
        assert "overlap" in err

    def test_unknown_column_exit_one(self, mi_file, capsys):
        code, _, err = run_cli(capsys, "estimate-mi", "--data", mi_file,
                               "--x-cols", "nope", "--y-cols", "y1")
        assert code == 1
        assert "nope" in err


class TestBenchmarkCommand:
    ARGS = ["benchmark", "--estimators", "kkle", "--dims", "1", "--rhos", "0.5",
            "--n", "200", "--trials", "2", "--jobs", "1",
            "--mode", "dual", "--step", "0.2", "--max-iter", "30", "--batch", "1000000"]

    def test_csv_to_file(self, tmp_path, capsys):
        dest = tmp_path / "report.csv"
        code, _, _ = run_cli(capsys, *self.ARGS, "--format", "csv", "--out", str(dest))
        assert code == 0
        lines = dest.read_text().splitlines()
        assert lines[0].startswith("estimator,dim,rho,true_mi,bias,rmse,variance")
        assert len(lines) == 2

    def test_seed_determinism_of_statistics(self, tmp_path, capsys):
        # everything except the wall-clock runtime column must repeat exactly
        from kernelkl.benchmark import parse_csv_report

        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(capsys, *self.ARGS, "--format", "csv", "--seed", "3", "--out", str(a))
        run_cli(capsys, *self.ARGS, "--format", "csv", "--seed", "3", "--out", str(b))
        rows_a = parse_csv_report(a.read_bytes())
        rows_b = parse_csv_report(b.read_bytes())
        for ra, rb in zip(rows_a, rows_b):
            ra.pop("mean_runtime_seconds")
            rb.pop("mean_runtime_seconds")
        assert rows_a == rows_b

    def test_table_to_stdout(self, capsys):
        code = main(self.ARGS + ["--format", "table"])
        assert code == 0

    def test_unknown_estimator_exit_one(self, capsys):
        code, _, err = run_cli(capsys, "benchmark", "--estimators", "magic",
                               "--rhos", "0.5", "--n", "100", "--trials", "2")
        assert code == 1
        assert "magic" in err


class TestFairnessCommand:
    @pytest.fixture()
    def audit_file(self, tmp_path):
        rng = np.random.default_rng(6)
        n = 1500
        pred = rng.normal(size=n)
        attr = rng.integers(0, 2, size=n).astype(float)
        label = rng.integers(0, 2, size=n).astype(float)
        path = tmp_path / "audit.csv"
        write_csv_dataset(path, ["pred", "attr", "label"], np.column_stack([pred, attr, label]))
        return str(path)

    def test_parity_only(self, audit_file, capsys):
        code, out, _ = run_cli(capsys, "fairness", "--data", audit_file,
                               "--pred-col", "pred", "--attr-col", "attr", *FAST)
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        assert payload["demographic_parity_mi"] <= 0.05
        assert payload["equality_of_odds_mi"] is None

    def test_full_audit(self, audit_file, capsys):
        code, out, _ = run_cli(capsys, "fairness", "--data", audit_file,
                               "--pred-col", "pred", "--attr-col", "attr",
                               "--label-col", "label", "--positive-class", "1", *FAST)
        assert code == 0
        payload = json.loads(out)
        assert payload["equality_of_odds_mi"] is not None
        assert payload["equality_of_opportunity_mi"] is not None
        assert set(payload["per_class_detail"]) == {"0", "1"}

    def test_positive_class_without_labels_exit_one(self, audit_file, capsys):
        code, _, err = run_cli(capsys, "fairness", "--data", audit_file,
                               "--pred-col", "pred", "--attr-col", "attr",
                               "--positive-class", "1")
        assert code == 1
        assert "--label-col" in err

    def test_determinism(self, audit_file, capsys):
        args = ["fairness", "--data", audit_file, "--pred-col", "pred",
                "--attr-col", "attr", "--seed", "8", *FAST]
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2


class TestArgumentErrors:
    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_missing_required_flag(self, capsys):
        assert main(["estimate-kl", "--p", "only_one_side.csv"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
