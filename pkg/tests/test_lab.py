from polariton_beats.basis import ModelParams
from polariton_beats.hamiltonians import ModelKind
from polariton_beats.data import ExperimentConfig, read_table
from polariton_beats.errors import ValidityWarning
from polariton_beats.lab import run_experiment, simulate, predictions
from polariton_beats.lab import parallel_map, split_config
from polariton_beats.lab import single_manifold_check, sweep_n
from polariton_beats.lab import detuning_scan, energy_schema, overlay
from polariton_beats.lab import alpha_scaling, default_detunings
import json
import math
import os
import warnings
import numpy as np
import pytest


def warn_twice(value):
    warnings.warn(f"value {value}", ValidityWarning)
    return 2 * value


def test_parallel_map_in_process():
    with pytest.warns(ValidityWarning):
        outputs = parallel_map(warn_twice, [1, 2])
    assert [result for result, _ in outputs] == [2, 4]
    assert outputs[0][1] == [("ValidityWarning", "value 1")]


def test_split_config():
    experiment, options = split_config(dict(g=0.05, g_values=[0.1]),
                                       g_values=None, n_values=[2])
    assert experiment.g == 0.05
    assert options == dict(g_values=[0.1], n_values=[2])


def test_simulate_diagnostics():
    experiment = ExperimentConfig.from_dict(dict(
        model_kinds=["tc"], t_max=200.0, ode_check=True))
    n_mean, n_var, diagnostics = simulate(ModelKind.TC, experiment)
    assert n_mean.grid.count == n_var.grid.count == 401
    assert diagnostics["norm_drift"] < 1e-10
    assert diagnostics["energy_drift"] < 1e-10
    assert diagnostics["excitation_drift"] < 1e-10
    assert diagnostics["convergence"]["passed"]
    assert diagnostics["ode_difference"] < 1e-6


def test_predictions(reference):
    report = predictions(ModelKind.DM, reference)
    assert report["alpha_pred"] == pytest.approx(-1.225e-3)
    assert report["alpha_numeric"] < 0
    assert report["t_beat"] == pytest.approx(8 * math.pi / 0.0049)
    assert "alpha_pred" not in predictions(
        ModelKind.TC, reference.replace(omega_c=1.05))
    assert predictions(ModelKind.TC, ModelParams(n_tls=1)) == {}


def test_run_experiment(tmp_path):
    out_dir = str(tmp_path / "run")
    summary = run_experiment(dict(model_kinds=["tc", "dm"], t_max=400.0,
                                  out_dir=out_dir))
    assert sorted(os.listdir(out_dir)) == [
        "dm.csv", "params.json", "summary.json", "tc.csv"]

    with open(os.path.join(out_dir, "params.json")) as params_file:
        params = json.load(params_file)
    assert params["model_kinds"] == ["tc", "dm"]
    assert params["t_max"] == 400.0

    table = read_table(os.path.join(out_dir, "dm.csv"))
    assert list(table.columns) == ["t", "n_mean", "n_var"]
    assert len(table) == 801
    assert table.n_mean.iloc[0] == pytest.approx(0.0, abs=1e-12)

    assert [run["model"] for run in summary["runs"]] == ["tc", "dm"]
    tc = summary["runs"][0]
    assert tc["beat"]["omega_fit"] == pytest.approx(
        0.07 * math.sqrt(3.0), rel=1e-2)
    assert tc["diagnostics"]["excitation_drift"] < 1e-10


def test_run_experiment_sweep(tmp_path):
    out_dir = str(tmp_path / "sweep")
    summary = run_experiment(dict(
        model_kinds=["tc"], t_max=400.0, out_dir=out_dir,
        sweep=dict(name="g", values=[0.05, 0.07])))
    assert os.path.exists(os.path.join(out_dir, "tc_g=0.05.csv"))
    assert os.path.exists(os.path.join(out_dir, "tc_g=0.07.csv"))
    assert [run["params"]["g"] for run in summary["runs"]] == [0.05, 0.07]
    assert summary["runs"][1]["sweep_point"] == ("g", 0.07)


def test_run_experiment_tensorboard(tmp_path):
    out_dir = str(tmp_path / "logged")
    run_experiment(dict(model_kinds=["tc"], t_max=200.0, out_dir=out_dir,
                        tensorboard=True))
    assert os.listdir(os.path.join(out_dir, "logs"))


def test_single_manifold_check(reference):
    report = single_manifold_check(reference)
    assert report["passed"]
    assert report["modulation_depth"] < 0.02


def test_sweep_n(tmp_path):
    table = sweep_n(dict(model_kinds=["dm"], out_dir=str(tmp_path),
                         n_values=[2, 5]))
    assert list(table.N) == [2, 5]
    assert table.alpha_pred.iloc[0] == pytest.approx(-1.225e-3)
    assert table.alpha_pred.iloc[1] == 0.0
    assert math.isinf(table.t_beat.iloc[1])
    assert table.modulation_depth.iloc[1] < 0.15
    assert os.path.exists(os.path.join(str(tmp_path), "sweep_n.csv"))


def test_default_detunings(reference):
    detunings = default_detunings(reference)
    assert len(detunings) == 17
    assert detunings[8] == pytest.approx(0.0, abs=1e-15)
    assert max(detunings) == pytest.approx(2 * 2.45e-3)


def test_detuning_scan(tmp_path):
    report = detuning_scan(dict(out_dir=str(tmp_path),
                                detunings=[0.0, 2.45e-3]))
    table = report["table"]
    assert list(table.model) == ["dm", "dm", "tc"]
    assert report["estimated_detuning"] == pytest.approx(2.45e-3)
    assert report["best_detuning"] == pytest.approx(2.45e-3)
    assert report["best_modulation_depth"] < \
        0.2 * report["resonant_modulation_depth"]
    assert table.modulation_depth.iloc[2] > 0.02
    assert os.path.exists(os.path.join(str(tmp_path), "detuning.json"))


def test_energy_schema(tmp_path):
    table = energy_schema(dict(model_kinds=["tc", "dm"],
                               out_dir=str(tmp_path),
                               g_values=[0.03, 0.07]))
    assert list(table.model) == ["tc", "dm", "tc", "dm"]
    tc = table[table.model == "tc"]
    assert np.all(np.abs(tc.alpha) < 1e-12)
    assert np.all(table[table.model == "dm"].alpha < 0)


def test_overlay(tmp_path):
    report = overlay(dict(out_dir=str(tmp_path)))
    assert list(report["table"].columns) == ["t", "n_exact", "n_approx"]
    assert report["sup_norm"] < 0.5
    assert os.path.exists(os.path.join(str(tmp_path), "overlay_N2.csv"))


def test_alpha_scaling(tmp_path):
    report = alpha_scaling(dict(model_kinds=["dm"], t_max=8000.0, dt=1.0,
                                out_dir=str(tmp_path),
                                g_values=[0.04, 0.06, 0.08]))
    assert report["exponent"] == pytest.approx(2.0, abs=0.15)
    assert list(report["table"].g) == [0.04, 0.06, 0.08]
