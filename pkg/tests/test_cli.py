"""End-to-end CLI behavior: exit codes, file formats, reproducibility."""

import json

import pytest

from annealstat.cli import main
from annealstat.models import QuboModel
from annealstat.samplers import exact_solve

TWO_VAR_QUBO = "0 0 -1.0\n1 1 -1.0\n0 1 3.0\n"


@pytest.fixture
def two_var_file(tmp_path):
    path = tmp_path / "problem.qubo"
    path.write_text(TWO_VAR_QUBO)
    return str(path)


class TestSolve:
    def test_exact_matches_library(self, two_var_file, tmp_path, capsys):
        out = tmp_path / "result.json"
        code = main(
            [
                "solve",
                "--input",
                two_var_file,
                "--sampler",
                "exact",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        model = QuboModel(num_vars=2, linear={0: -1.0, 1: -1.0}, quadratic={(0, 1): 3.0})
        expected = exact_solve(model)
        assert doc["solutions"] == [
            {"assignment": list(r.assignment.values), "energy": r.energy, "occurrences": 1}
            for r in expected
        ]
        assert doc["info"]["config"]["sampler"] == "exact"
        assert "timestamp" not in doc["info"]

    def test_duplicate_line_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.qubo"
        path.write_text("0 0 1.0\n0 0 2.0\n")
        code = main(["solve", "--input", str(path), "--sampler", "exact"])
        assert code == 2
        assert "line 2" in capsys.readouterr().err

    def test_too_large_for_exact_exits_4(self, tmp_path, capsys):
        path = tmp_path / "big.qubo"
        path.write_text("29 29 1.0\n")
        assert main(["solve", "--input", str(path), "--sampler", "exact"]) == 4

    def test_missing_file_exits_1(self, capsys):
        assert main(["solve", "--input", "/nonexistent/x.qubo"]) == 1

    def test_embedding_failure_exits_3(self, tmp_path):
        path = tmp_path / "k3.qubo"
        path.write_text("0 1 1.0\n0 2 1.0\n1 2 1.0\n")
        code = main(
            ["solve", "--input", str(path), "--sampler", "sa", "--topology", "chimera:1,1,1"]
        )
        assert code == 3

    def test_reproducible_bytes(self, two_var_file, tmp_path):
        out = tmp_path / "result.json"
        argv = [
            "solve",
            "--input",
            two_var_file,
            "--sampler",
            "sa",
            "--reads",
            "50",
            "--sweeps",
            "20",
            "--seed",
            "7",
            "--out",
            str(out),
            "--no-timestamp",
        ]
        main(argv)
        first = out.read_bytes()
        main(argv)
        assert out.read_bytes() == first

    def test_boltzmann_backend(self, two_var_file, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            [
                "solve",
                "--input",
                two_var_file,
                "--sampler",
                "boltzmann",
                "--noise-sigma-a",
                "0",
                "--noise-sigma-b",
                "0",
                "--tau",
                "1.0",
                "--reads",
                "6000",
                "--seed",
                "2",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert sum(s["occurrences"] for s in doc["solutions"]) == 6000
        # degenerate minima (0,1) and (1,0) should dominate roughly equally
        top = {tuple(s["assignment"]): s["occurrences"] for s in doc["solutions"]}
        assert top[(0, 1)] + top[(1, 0)] > 4000

    def test_embedded_solve(self, two_var_file, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            [
                "solve",
                "--input",
                two_var_file,
                "--sampler",
                "sa",
                "--reads",
                "100",
                "--sweeps",
                "50",
                "--seed",
                "3",
                "--topology",
                "chimera:2,2,4",
                "--chain-strength",
                "-3",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["info"]["embedding_qubits"] >= 2
        assert doc["solutions"][0]["energy"] == -1.0
        assert len(doc["solutions"][0]["assignment"]) == 2

    def test_full_spectrum_flag(self, two_var_file, tmp_path):
        out = tmp_path / "r.json"
        main(
            [
                "solve",
                "--input",
                two_var_file,
                "--sampler",
                "exact",
                "--full-spectrum",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert len(json.loads(out.read_text())["solutions"]) == 4


class TestEmbed:
    def test_triangle_metrics(self, tmp_path):
        path = tmp_path / "k3.qubo"
        path.write_text("0 1 1.0\n0 2 1.0\n1 2 1.0\n")
        out = tmp_path / "emb.json"
        code = main(
            [
                "embed",
                "--input",
                str(path),
                "--topology",
                "chimera:1,1,4",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["metrics"]["num_physical_qubits"] == 4
        assert doc["metrics"]["max_chain_length"] == 2
        assert doc["chain_strength"] == -1.0
        chains = {int(k): v for k, v in doc["chains"].items()}
        assert set(chains) == {0, 1, 2}

    def test_native_problem_unit_chains(self, tmp_path):
        path = tmp_path / "edge.qubo"
        path.write_text("0 1 1.0\n")
        out = tmp_path / "emb.json"
        main(
            [
                "embed",
                "--input",
                str(path),
                "--topology",
                "chimera:1,1,4",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        doc = json.loads(out.read_text())
        assert doc["metrics"]["max_chain_length"] == 1

    def test_impossible_embedding_exits_3(self, tmp_path):
        path = tmp_path / "k5.qubo"
        lines = [f"{i} {j} 1.0" for i in range(5) for j in range(i + 1, 5)]
        path.write_text("\n".join(lines) + "\n")
        assert main(["embed", "--input", str(path), "--topology", "chimera:1,1,1"]) == 3


class TestMle:
    @pytest.fixture
    def data_file(self, tmp_path):
        values = [-2.296, -0.216, -0.082, 0.231, 1.127, 1.164, 1.189, 1.236, 1.272, 1.373]
        path = tmp_path / "data.csv"
        path.write_text("\n".join(str(v) for v in values) + "\n")
        return str(path)

    def test_trace_csv(self, data_file, tmp_path):
        out = tmp_path / "trace.csv"
        code = main(
            [
                "mle",
                "--data",
                data_file,
                "--model",
                "normal",
                "--powers-high",
                "1",
                "--powers-low",
                "-7",
                "--start",
                "0,1",
                "--iters",
                "6",
                "--sampler",
                "exact",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("# config ")
        assert lines[1] == "iteration,theta,phi,energy,loglik"
        rows = [line.split(",") for line in lines[2:]]
        assert len(rows) == 6
        best = max(rows, key=lambda r: float(r[4]))
        assert (float(best[1]), float(best[2])) == (0.5, 1.09375)

    def test_reproducible(self, data_file, tmp_path):
        out = tmp_path / "trace.csv"
        argv = [
            "mle",
            "--data",
            data_file,
            "--iters",
            "3",
            "--sampler",
            "sa",
            "--reads",
            "50",
            "--sweeps",
            "30",
            "--seed",
            "5",
            "--out",
            str(out),
            "--no-timestamp",
        ]
        main(argv)
        first = out.read_bytes()
        main(argv)
        assert out.read_bytes() == first

    def test_bad_data_file_exits_2(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1.0\nnot-a-number\n")
        assert main(["mle", "--data", str(path), "--sampler", "exact"]) == 2


class TestDesign:
    def test_exact_4x4(self, tmp_path):
        out = tmp_path / "design.csv"
        code = main(
            [
                "design",
                "--size",
                "4",
                "--sampler",
                "exact",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("# config ")
        assert "row_latin=True col_latin=True diagonal_free=True" in lines[1]
        points = [tuple(map(int, line.split(","))) for line in lines[3:]]
        assert len(points) == 4

    def test_sa_reproducible(self, tmp_path):
        out = tmp_path / "design.csv"
        argv = [
            "design",
            "--size",
            "5",
            "--sampler",
            "sa",
            "--reads",
            "500",
            "--sweeps",
            "100",
            "--seed",
            "9",
            "--out",
            str(out),
            "--no-timestamp",
        ]
        main(argv)
        first = out.read_bytes()
        main(argv)
        assert out.read_bytes() == first


class TestMatinv:
    @pytest.fixture
    def matrix_file(self, tmp_path):
        path = tmp_path / "A.csv"
        path.write_text(
            "1.344,0.418,-0.935\n-1.018,1.095,-0.250\n0.277,-0.384,0.755\n"
        )
        return str(path)

    def test_estimate_and_summary(self, matrix_file, tmp_path, capsys):
        out = tmp_path / "V.csv"
        code = main(
            [
                "matinv",
                "--input",
                matrix_file,
                "--bits",
                "6",
                "--power-high",
                "0",
                "--sampler",
                "exact",
                "--out",
                str(out),
                "--no-timestamp",
            ]
        )
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["residual"] < 0.2
        assert len(summary["column_energies"]) == 3
        assert summary["failures"] == {}
        lines = out.read_text().strip().splitlines()
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
        assert len(rows) == 3 and len(rows[0]) == 3
        assert rows[0][0] == 0.625

    def test_ragged_matrix_exits_2(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n3\n")
        assert main(["matinv", "--input", str(path), "--out", str(tmp_path / "v.csv")]) == 2


def test_unknown_model_choice_rejected(tmp_path):
    # argparse handles invalid enum values with SystemExit(2)
    path = tmp_path / "d.csv"
    path.write_text("1.0\n")
    with pytest.raises(SystemExit):
        main(["mle", "--data", str(path), "--model", "cauchy"])
