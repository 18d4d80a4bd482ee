"""Command-line client: config handling, report output, and subcommands."""

import json

import pytest
from click.testing import CliRunner

from qexpect.cli import main

EXACT_Q2 = -0.1846443826982403

BASE_CONFIG = """\
[experiment]
operator = builtin:q2_gc
encoding = gc
method = exact
amplitudes = 0.2759, 0.9611
runs = 2
seed = 7
"""


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, text=BASE_CONFIG, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestRunCommand:
    def test_config_file_prints_json_report(self, runner, tmp_path):
        result = runner.invoke(main, ["run", write_config(tmp_path)])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["median"] == pytest.approx(EXACT_Q2, abs=1e-12)
        assert len(report["per_run_values"]) == 2
        assert report["config"]["operator"] == "builtin:q2_gc"

    def test_flags_override_config(self, runner, tmp_path):
        result = runner.invoke(
            main, ["run", write_config(tmp_path), "--runs", "3", "--seed", "1"]
        )
        report = json.loads(result.output)
        assert len(report["per_run_values"]) == 3
        assert report["seeds"] == [4, 5, 6]

    def test_flags_alone_suffice(self, runner):
        result = runner.invoke(
            main,
            [
                "run",
                "--operator", "builtin:q2_gc",
                "--amplitudes", "0.2759, 0.9611",
                "--method", "exact",
            ],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["median"] == pytest.approx(EXACT_Q2, abs=1e-12)

    def test_output_file_and_summary_line(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(
            main, ["run", write_config(tmp_path), "--output", str(out)]
        )
        assert result.exit_code == 0
        assert "median" in result.output
        assert str(out) in result.output
        assert json.loads(out.read_text())["median"] == pytest.approx(
            EXACT_Q2, abs=1e-12
        )

    def test_csv_format_to_stdout(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["run", write_config(tmp_path), "--format", "csv", "--method",
             "htest", "--shots", "500"],
        )
        lines = result.output.splitlines()
        assert lines[0] == "run,seed,value,energy"
        assert len(lines) == 3

    def test_reruns_are_identical_apart_from_wall_time(self, runner, tmp_path):
        config = write_config(
            tmp_path, BASE_CONFIG.replace("method = exact", "method = htest")
            + "shots = 1000\n"
        )
        scrub = lambda text: [
            line for line in text.splitlines() if "wall_time" not in line
        ]
        a = runner.invoke(main, ["run", config])
        b = runner.invoke(main, ["run", config])
        assert scrub(a.output) == scrub(b.output)

    def test_operator_path_relative_to_config_dir(self, runner, tmp_path):
        (tmp_path / "local.ops").write_text("1.0 Z0\n")
        config = write_config(
            tmp_path,
            "[experiment]\noperator = local.ops\namplitudes = 1.0, 0.0\n",
        )
        result = runner.invoke(main, ["run", config])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["median"] == pytest.approx(1.0, abs=1e-12)
        assert report["config"]["operator"] == "local.ops"

    def test_vqe_flags(self, runner):
        result = runner.invoke(
            main,
            [
                "run",
                "--operator", "builtin:q2_gc",
                "--vqe-hamiltonian", "builtin:q2_gc",
                "--vqe-ansatz", "single-ry",
                "--vqe-restarts", "2",
                "--vqe-max-evaluations", "400",
            ],
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["vqe_energies"] is not None
        assert report["median"] == pytest.approx(
            report["vqe_energies"][0], abs=1e-9
        )

    def test_missing_operator_is_a_usage_error(self, runner):
        result = runner.invoke(main, ["run", "--amplitudes", "1, 0"])
        assert result.exit_code != 0
        assert "operator" in result.output

    def test_bad_config_key_fails_cleanly(self, runner, tmp_path):
        config = write_config(tmp_path, "[experiment]\nshotz = 5\n")
        result = runner.invoke(main, ["run", config])
        assert result.exit_code == 1
        assert "shotz" in result.output

    def test_unknown_builtin_fails_cleanly(self, runner):
        result = runner.invoke(
            main,
            ["run", "--operator", "builtin:nope", "--amplitudes", "1, 0"],
        )
        assert result.exit_code == 1
        assert "available" in result.output


class TestHintCommand:
    def test_prints_budget(self, runner):
        result = runner.invoke(main, ["hint", "0.01"])
        assert result.exit_code == 0
        assert result.output.strip() == "1000"

    def test_zero_warns_and_returns_maximum(self, runner):
        result = runner.invoke(main, ["hint", "0"])
        assert result.exit_code == 0
        assert "warning" in result.output
        assert "10000000" in result.output

    def test_out_of_range_fails(self, runner):
        result = runner.invoke(main, ["hint", "1.5"])
        assert result.exit_code == 1


class TestInspectCommand:
    def test_builtin_summary(self, runner):
        result = runner.invoke(main, ["inspect", "builtin:q2_gc"])
        assert result.exit_code == 0
        assert "qubits: 1" in result.output
        assert "terms:  3" in result.output
        assert "X0" in result.output

    def test_operator_file(self, runner, tmp_path):
        path = tmp_path / "op.ops"
        path.write_text("0.5 X0 X1\n")
        result = runner.invoke(main, ["inspect", str(path)])
        assert result.exit_code == 0
        assert "qubits: 2" in result.output

    def test_malformed_file_fails_cleanly(self, runner, tmp_path):
        path = tmp_path / "op.ops"
        path.write_text("0.5 W0\n")
        result = runner.invoke(main, ["inspect", str(path)])
        assert result.exit_code == 1
        assert "bad factor" in result.output
