import os

import pytest
import simplejson
from mock import patch

from scaletik.cli import build_parser, effective_config, main
from scaletik.errors import StudyError
from scaletik.experiments.verification import Check, VerifyReport
from scaletik.utils.toml import toml_loads


def test_print_config(capsys):
    assert main(["--print-config", "--seed", "4", "--set", "smoothing.K=512"]) == 0
    printed = toml_loads(capsys.readouterr().out)
    assert printed["seed"] == 4
    assert printed["smoothing"]["K"] == 512


def test_help_and_version(capsys):
    assert main(["--help"]) == 0
    assert "smoothing" in capsys.readouterr().out
    assert main(["--version"]) == 0


@pytest.mark.parametrize(
    "args",
    [
        ["--frobnicate"],
        [],
        ["smoothing", "--deltas", "3-14"],
        ["smoothing", "--rule", "l-curve"],
        ["smoothing", "--set", "smoothing.K=fast"],
        ["tables", "--format", "xlsx"],
    ],
)
def test_user_errors_exit_2(args, tmpdir):
    assert main(args + ["--out", str(tmpdir)]) == 2


def test_bad_config_file(tmpdir, capsys):
    path = tmpdir.join("bad.toml")
    path.write("seed = 1\n[smoothing\n")
    assert main(["--config", str(path), "verify"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_flags_override_config_file(tmpdir):
    path = tmpdir.join("run.toml")
    path.write('[smoothing]\nK = 512\nkind = "hat"\nrule = "simple"\n')
    options = build_parser().parse_args(
        ["smoothing", "--config", str(path), "--u", "0.5", "--set", "smoothing.rule=discrepancy"]
    )
    config = effective_config(options)
    assert config["smoothing"]["K"] == 512
    assert config["smoothing"]["u"] == 0.5
    assert config["smoothing"]["kind"] == ""
    assert config["smoothing"]["rule"] == "discrepancy"


def test_tables_flags():
    options = build_parser().parse_args(
        ["tables", "--problem", "param-id", "--format", "csv", "--format", "json", "--from", "x.json"]
    )
    table = effective_config(options)["tables"]
    assert table["problem"] == "param-id"
    assert table["formats"] == ["csv", "json"]
    assert table["from"] == "x.json"


def test_smoothing_run(tmpdir, capsys):
    out = str(tmpdir.join("out"))
    args = [
        "smoothing",
        "--out", out,
        "--u", "1.5",
        "--deltas", "3..8",
        "--reps", "1",
        "--workers", "1",
        "--set", "smoothing.K=256",
    ]
    assert main(args) == 0
    assert sorted(os.listdir(out)) == [
        "config.toml",
        "manifest.json",
        "smoothing_results.csv",
        "smoothing_results.json",
        "smoothing_results.md",
    ]
    with open(os.path.join(out, "smoothing_results.csv")) as f:
        lines = f.read().splitlines()
    assert lines[0].split(",")[4] == "kappa_hat"
    assert len(lines) == 3
    with open(os.path.join(out, "manifest.json")) as f:
        manifest = simplejson.load(f)
    assert manifest["subcommand"] == "smoothing"
    assert manifest["config"]["smoothing"]["K"] == 256
    assert "numpy" in manifest["versions"]
    assert "### smoothing" in capsys.readouterr().out


def test_study_failure_exit_1(tmpdir, capsys):
    with patch("scaletik.cli.run_study", side_effect=StudyError(10, 12)):
        assert main(["smoothing", "--out", str(tmpdir)]) == 1
    assert "10 of 12 study cells failed" in capsys.readouterr().err


def test_verify_writes_report(tmpdir, capsys):
    report = VerifyReport([Check("adjoint_identity", 1e-11, "ok")])
    with patch("scaletik.cli.verify_suite", return_value=report) as suite:
        assert main(["verify", "--out", str(tmpdir), "--check", "adjoint_identity"]) == 0
    suite.assert_called_once_with(seed=0, only=["adjoint_identity"])
    with open(str(tmpdir.join("verify_report.json"))) as f:
        assert simplejson.load(f)["passed"] is True
    assert "adjoint_identity" in capsys.readouterr().out


def test_verify_failure_exit_1(tmpdir):
    report = VerifyReport([Check("adjoint_identity", -1.0, "mismatch")])
    with patch("scaletik.cli.verify_suite", return_value=report):
        assert main(["verify", "--out", str(tmpdir)]) == 1


def test_missing_results_file_exit_2(tmpdir, capsys):
    missing = str(tmpdir.join("nowhere.json"))
    args = ["tables", "--from", missing, "--out", str(tmpdir.join("out"))]
    assert main(args) == 2
    assert "cannot read results" in capsys.readouterr().err


def test_output_path_is_a_file_exit_2(tmpdir, capsys):
    path = tmpdir.join("taken")
    path.write("")
    with patch("scaletik.cli.verify_suite") as suite:
        assert main(["verify", "--out", str(path)]) == 2
    suite.assert_not_called()
    assert "cannot create output directory" in capsys.readouterr().err


@pytest.mark.parametrize(
    "flags, message",
    [
        (["--max-steps", "-1"], "max_steps must be >= 0"),
        (["--tau", "0"], "tau must be positive"),
    ],
)
def test_invalid_discrepancy_settings_exit_2(flags, message, tmpdir, capsys):
    args = ["smoothing", "--rule", "discrepancy", "--out", str(tmpdir)] + flags
    with patch("scaletik.cli.run_study") as study:
        assert main(args) == 2
    study.assert_not_called()
    assert message in capsys.readouterr().err
