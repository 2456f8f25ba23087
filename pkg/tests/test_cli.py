import json
import math
from typing import Any, Dict, Tuple

import pytest

from cli.app import create_cli
from models.models import Matrix
from utils.matrix_io import read_matrix


def invoke(runner, *args: str):
    return runner.invoke(create_cli(), list(args))


def parse_report(text: str) -> Tuple[Dict[str, Any], str]:
    body, summary = text.rstrip("\n").rsplit("\n", 1)
    return json.loads(body), summary


def test_bound_on_sample_matrix(runner, matrix_file, sample_matrix):
    result = invoke(runner, "bound", "--input", matrix_file(sample_matrix))
    assert result.exit_code == 0, result.output
    report, summary = parse_report(result.stdout)
    assert report["bound"] == pytest.approx(math.sqrt(32), rel=1e-9)
    assert (report["alpha"], report["beta"], report["kappa"]) == ("4", "9", "2")
    assert report["case"] == "alpha_sq_gt_beta"
    assert report["formula"] == "alpha_kappa"
    assert report["det"] == "-1"
    assert summary.startswith("# ")


def test_bound_with_out_of_range_powers(runner, matrix_file):
    result = invoke(runner, "bound", "--input", matrix_file(Matrix.identity(30).scale(10**11)))
    assert result.exit_code == 0, result.output
    report, summary = parse_report(result.stdout)
    assert report["bound"] == "inf"
    assert report["det"] == str(10**330)
    assert "inf" in summary


def test_verify_flags_negative_determinant(runner, matrix_file):
    result = invoke(runner, "verify", "--input", matrix_file(Matrix([[0, 1], [1, 0]])))
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["det_ok"] is False
    assert report["gram_ok"] is True


def test_complex_bound(runner, matrix_file):
    result = invoke(
        runner, "complex-bound", "--input", matrix_file(Matrix.zeros(2)), "--imag", matrix_file(Matrix.ones(2))
    )
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["bound"] == pytest.approx(4 * 27**-0.25, rel=1e-9)
    assert report["abs_det"] == pytest.approx(0.0, abs=1e-12)


def test_construct_orthogonal(runner, tmp_path):
    out = tmp_path / "m.csv"
    result = invoke(
        runner, "construct", "--n", "2", "--alpha", "0", "--beta", "1", "--variant", "orthogonal",
        "--matrix-out", str(out),
    )
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["matrix"] == [["0", "1"], ["-1", "0"]]
    assert read_matrix(out) == Matrix([[0, 1], [-1, 0]])


def test_construct_then_verify(runner, tmp_path):
    out = tmp_path / "shifted.csv"
    result = invoke(
        runner, "construct", "--n", "4", "--alpha", "3", "--beta", "5/2", "--variant", "shifted",
        "--matrix-out", str(out),
    )
    assert result.exit_code == 0, result.output
    result = invoke(runner, "verify", "--input", str(out))
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["regimes"] == ["shifted"]
    assert report["rowsum_ok"] and report["colsum_ok"] and report["gram_ok"] and report["det_ok"]


def test_construct_infeasible_pair_exits_two(runner):
    result = invoke(runner, "construct", "--n", "2", "--alpha", "2", "--beta", "1", "--variant", "orthogonal")
    assert result.exit_code == 2
    assert "InfeasiblePair" in result.output


def test_bad_rational_flag_exits_two(runner):
    result = invoke(runner, "construct", "--n", "2", "--alpha", "1/0", "--beta", "1", "--variant", "shifted")
    assert result.exit_code == 2


def test_unparsable_matrix_exits_two(runner, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,oops\n", encoding="utf-8")
    result = invoke(runner, "bound", "--input", str(path))
    assert result.exit_code == 2
    assert "MatrixParseError" in result.output
    missing = invoke(runner, "bound", "--input", str(tmp_path / "absent.csv"))
    assert missing.exit_code == 2


def test_search_exhaustive(runner):
    result = invoke(runner, "search", "--entries", "1..9", "--n", "3", "--mode", "exhaustive")
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["best_abs_det"] == "412"
    assert report["upper_bound"] == pytest.approx(450)
    assert report["exhaustive_certificate"] is True


def test_search_is_independent_of_workers(runner):
    serial = invoke(runner, "--workers", "1", "search", "--family", "full-square", "--n", "3")
    parallel = invoke(runner, "--workers", "2", "search", "--family", "full-square", "--n", "3")
    assert serial.exit_code == parallel.exit_code == 0
    assert serial.stdout == parallel.stdout


def test_anneal_report_is_reproducible(runner):
    args = ("search", "--entries", "1..9", "--n", "3", "--mode", "anneal", "--seed", "7", "--budget", "2000")
    first, second = invoke(runner, *args), invoke(runner, *args)
    assert first.exit_code == 0, first.output
    assert first.stdout == second.stdout
    report, _ = parse_report(first.stdout)
    assert report["exhaustive_certificate"] is False
    assert report["seed"] == 7


def test_search_guard_exits_three(runner):
    result = invoke(runner, "search", "--entries", "1..16", "--n", "4")
    assert result.exit_code == 3
    assert "SearchSpaceTooLarge" in result.output


def test_search_needs_one_entry_source(runner):
    assert invoke(runner, "search", "--n", "2").exit_code == 2
    assert invoke(runner, "search", "--n", "2", "--entries", "1..4", "--family", "repeated").exit_code == 2


def test_ratio_table(runner):
    result = invoke(runner, "ratio-table", "--family", "repeated", "--n-max", "2")
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    (row,) = report["rows"]
    assert (row["n"], row["best"], row["certificate"]) == (2, "3", True)
    assert row["ratio"] == pytest.approx(1.0)


def test_infdet(runner, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "diagonal_geometric", "c": "1/2", "r": "1/2"}), encoding="utf-8")
    result = invoke(runner, "infdet", "--spec", str(spec), "--terms", "60")
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["koch_bound"] == pytest.approx(math.exp(1 / 24 - 1 / 2))
    assert report["trace_sum"] == "1/2"
    assert report["square_sum"] == "1/12"
    assert len(report["rows"]) == 60
    assert all(abs(r["truncated_det"]) <= r["finite_bound"] * (1 + 1e-9) for r in report["rows"])


def test_infdet_divergent_exits_two(runner, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "diagonal_geometric", "c": "1", "r": "2"}), encoding="utf-8")
    result = invoke(runner, "infdet", "--spec", str(spec))
    assert result.exit_code == 2
    assert "DivergentSpec" in result.output


def test_app_bounds_by_parameters(runner):
    result = invoke(runner, "app-bounds", "--kind", "ryser", "--n", "3", "--t", "6")
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["ryser"]["bound"] == pytest.approx(2.0)

    result = invoke(runner, "app-bounds", "--kind", "entry-cap", "--n", "4", "--gamma", "1")
    report, _ = parse_report(result.stdout)
    assert report["entry-cap"]["bound"] == pytest.approx(16.0)


def test_app_bounds_all_on_hadamard_matrix(runner, matrix_file):
    h4 = Matrix([[-1 if i == j else 1 for j in range(4)] for i in range(4)])
    result = invoke(runner, "app-bounds", "--input", matrix_file(h4))
    assert result.exit_code == 0, result.output
    report, _ = parse_report(result.stdout)
    assert report["best"]["excess"] == "8"
    assert report["best"]["is_hadamard"] is True
    assert report["trace"]["holds"] is True
    assert report["ryser"]["skipped"].startswith("NotBinaryMatrix")
    assert report["brent"]["skipped"].startswith("UsageError")
    assert report["entry-cap"]["bound"] == pytest.approx(16.0)


def test_app_bounds_missing_parameters(runner):
    assert invoke(runner, "app-bounds", "--kind", "ryser").exit_code == 2
    result = invoke(runner, "app-bounds", "--kind", "best", "--input", "/nonexistent/m.csv")
    assert result.exit_code == 2


def test_report_written_to_file(runner, matrix_file, tmp_path, sample_matrix):
    out = tmp_path / "report.json"
    result = invoke(runner, "bound", "--input", matrix_file(sample_matrix), "--output", str(out))
    assert result.exit_code == 0
    report, _ = parse_report(out.read_text(encoding="utf-8"))
    assert report["n"] == 2
