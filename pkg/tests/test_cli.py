from polariton_beats.cli import cli, parse_floats
from click.testing import CliRunner
import json
import os
import pytest


def invoke(*args):
    return CliRunner().invoke(cli, list(args), catch_exceptions=False)


def test_parse_floats():
    assert parse_floats("0.1, 0.2,") == [0.1, 0.2]
    assert parse_floats(None) is None


def test_convert():
    result = invoke("convert")
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["g_over_omega"] == 0.075
    assert report["beat_to_rabi"] == pytest.approx(92.376, rel=1e-4)


def test_propagate_writes_traces(tmp_path):
    out_dir = str(tmp_path / "out")
    result = invoke("propagate", "--model", "tc", "--t-max", "300",
                    "--out", out_dir)
    assert result.exit_code == 0, result.output
    assert os.path.exists(os.path.join(out_dir, "tc.csv"))
    with open(os.path.join(out_dir, "params.json")) as params_file:
        assert json.load(params_file)["t_max"] == 300.0


def test_propagate_reads_config_file(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps(dict(g=0.05, t_max=300.0,
                                      model_kinds=["tc"])))
    out_dir = str(tmp_path / "out")
    result = invoke("propagate", "--config", str(config), "--g", "0.06",
                    "--out", out_dir, "--sweep", "n_tls=2,3")
    assert result.exit_code == 0, result.output
    with open(os.path.join(out_dir, "params.json")) as params_file:
        params = json.load(params_file)
    assert params["g"] == 0.06
    assert params["sweep"] == dict(name="n_tls", values=[2, 3])
    assert os.path.exists(os.path.join(out_dir, "tc_n_tls=3.csv"))


def test_invalid_parameters_fail_cleanly(tmp_path):
    result = CliRunner().invoke(cli, [
        "propagate", "--g=-1", "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "ParameterDomainError" in result.output


def test_spectrum(tmp_path):
    result = invoke("spectrum", "--model", "dm", "--out", str(tmp_path),
                    "--g-values", "0.05,0.07")
    assert result.exit_code == 0, result.output
    with open(os.path.join(str(tmp_path), "spectrum.json")) as report_file:
        report = json.load(report_file)
    assert report["triplets"]["dm"]["alpha_numeric"] < 0
    assert os.path.exists(os.path.join(str(tmp_path), "schema.csv"))


def test_beat(tmp_path):
    result = invoke("beat", "--model", "dm", "--out", str(tmp_path))
    assert result.exit_code == 0, result.output
    with open(os.path.join(str(tmp_path), "beat.json")) as report_file:
        report = json.load(report_file)
    assert report["model"] == "dm"
    assert report["beat"]["alpha_fit"] == pytest.approx(1.225e-3, rel=0.3)
    assert "overlay_sup_norm" in report
    assert "created" in report["metadata"]


def test_verify_selected_checks(tmp_path):
    result = invoke("verify", "--out", str(tmp_path),
                    "--check", "unit_conversion",
                    "--check", "beat_period_shape")
    assert result.exit_code == 0, result.output
    with open(os.path.join(str(tmp_path), "verify.json")) as report_file:
        report = json.load(report_file)
    assert report["passed"]
    assert [c["name"] for c in report["checks"]] == [
        "unit_conversion", "beat_period_shape"]


def test_beat_uses_model_from_config_file(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps(dict(model_kinds=["tc"], t_max=400.0)))
    result = invoke("beat", "--config", str(config), "--out", str(tmp_path))
    assert result.exit_code == 0, result.output
    with open(os.path.join(str(tmp_path), "beat.json")) as report_file:
        report = json.load(report_file)
    assert report["model"] == "tc"
    assert report["beat"]["modulation_depth"] < 0.02
