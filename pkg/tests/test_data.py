from polariton_beats.data import ExperimentConfig, SweepAxis, DEFAULT_CONFIG
from polariton_beats.data import resolve_config, load_config, parse_init
from polariton_beats.data import json_safe, write_json, write_summary
from polariton_beats.data import write_trace, read_table, trace_path
from polariton_beats.hamiltonians import ModelKind
from polariton_beats.spectral import ObservableTrace
from polariton_beats.errors import ParameterDomainError
from polariton_beats.utils import TimeGrid
import json
import math
import os
import numpy as np
import pytest


def test_defaults():
    config = ExperimentConfig.from_dict({})
    assert config.model_kinds == (ModelKind.TC, ModelKind.DM, ModelKind.PF)
    assert config.params.photon_cutoff == 8
    assert config.grid.count == 6001
    assert config.init == (2, 0)
    assert config.to_dict() == dict(DEFAULT_CONFIG)


def test_round_trip():
    config = ExperimentConfig.from_dict(dict(
        model_kinds=["dm"], n_tls=3, g=0.05,
        sweep=dict(name="g", values=[0.04, 0.06])))
    assert ExperimentConfig.from_dict(config.to_dict()) == config


@pytest.mark.parametrize("values", [
    dict(unknown=1), dict(model_kinds=["xx"]), dict(model_kinds=[]),
    dict(num_parallel=0), dict(dt=-0.5), dict(t_max=0.0),
    dict(init=[3, 0]), dict(init=[1]), dict(g=-1.0),
    dict(sweep=dict(name="t_max", values=[1.0]))])
def test_invalid_configs(values):
    with pytest.raises(ParameterDomainError):
        ExperimentConfig.from_dict(values)


def test_sweep_points():
    config = ExperimentConfig.from_dict(dict(
        sweep=dict(name="detuning", values=[-0.01, 0.02])))
    points = config.sweep_points()
    assert [p.omega_c for p in points] == pytest.approx([0.99, 1.02])
    assert all(p.sweep is None for p in points)

    cutoffs = ExperimentConfig.from_dict(dict(
        n_tls=3, sweep=dict(name="n_tls", values=[2, 4]))).sweep_points()
    assert [p.params.photon_cutoff for p in cutoffs] == [8, 10]


def test_sweep_axis_needs_values():
    with pytest.raises(ParameterDomainError):
        SweepAxis("g", [])


def test_resolve_config_precedence():
    config = resolve_config(dict(g=0.05, n_tls=3),
                            dict(g=0.06, n_tls=None, out_dir="x"))
    assert (config.g, config.n_tls, config.out_dir) == (0.06, 3, "x")


def test_load_config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(dict(g=0.05)))
    assert load_config(str(path)) == dict(g=0.05)
    path.write_text("[1, 2]")
    with pytest.raises(ParameterDomainError):
        load_config(str(path))


def test_parse_init():
    assert parse_init("2,0") == [2, 0]
    with pytest.raises(ParameterDomainError):
        parse_init("two")


def test_json_safe():
    value = json_safe(dict(a=np.float64(1.5), b=math.inf, c=np.arange(2),
                           d=ModelKind.DM, e=(np.int64(3), np.bool_(True)),
                           f=-math.inf))
    assert value == dict(a=1.5, b="inf", c=[0, 1], d="dm", e=[3, True],
                         f="-inf")


def test_write_json_and_summary(tmp_path):
    path = str(tmp_path / "nested" / "summary.json")
    write_summary(path, dict(t_beat=math.inf))
    with open(path) as summary_file:
        payload = json.load(summary_file)
    assert payload["t_beat"] == "inf"
    assert "created" in payload["metadata"]

    write_json(path, dict(x=1))
    with open(path, "rb") as raw:
        assert b"\r\n" not in raw.read()


def test_write_trace(tmp_path):
    grid = TimeGrid.span(1.0, 0.5)
    n_mean = ObservableTrace(grid, [0.0, 1.0 / 3.0, 2.0], "n_mean")
    n_var = ObservableTrace(grid, [0.0, 0.25, 0.5], "n_var")
    path = str(tmp_path / "dm.csv")
    write_trace(path, n_mean, n_var)

    with open(path, "rb") as raw:
        text = raw.read().decode()
    lines = text.split("\n")
    assert lines[0] == "t,n_mean,n_var"
    assert lines[2] == "0.5,0.333333333333,0.25"
    assert "\r" not in text

    table = read_table(path)
    assert list(table.columns) == ["t", "n_mean", "n_var"]
    np.testing.assert_allclose(table.n_mean, [0.0, 1.0 / 3.0, 2.0],
                               atol=1e-12)


def test_trace_path():
    assert trace_path("out", "DM") == os.path.join("out", "dm.csv")
    assert trace_path("out", ModelKind.PF, ("g", 0.07)) == \
        os.path.join("out", "pf_g=0.07.csv")
