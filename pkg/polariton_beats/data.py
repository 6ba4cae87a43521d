from polariton_beats.basis import ModelParams, basis_vector
from polariton_beats.hamiltonians import ModelKind
from polariton_beats.errors import ParameterDomainError, ContractError
from polariton_beats.utils import TimeGrid
from collections import namedtuple
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple
import datetime
import json
import math
import os
import pandas as pd
import numpy as np


FLOAT_FORMAT = "%.12g"
TRACE_COLUMNS = ("t", "n_mean", "n_var")
SWEEP_NAMES = ("omega_m", "omega_c", "g", "n_tls", "photon_cutoff",
               "detuning")


DEFAULT_CONFIG = {
    "model_kinds": ["tc", "dm", "pf"],
    "omega_m": 1.0,
    "omega_c": 1.0,
    "g": 0.07,
    "n_tls": 2,
    "photon_cutoff": None,
    "init": [2, 0],
    "t_max": 3000.0,
    "dt": 0.5,
    "t0": 0.0,
    "out_dir": "beat-lab",
    "sweep": None,
    "num_parallel": 1,
    "ode_check": False,
    "tensorboard": False}


class SweepAxis(namedtuple("SweepAxis", ["name", "values"])):
    """One parameter and the values it takes across a sweep; detuning
    sweeps set omega_c = omega_m + value"""

    def __new__(cls, name, values):
        if name not in SWEEP_NAMES:
            raise ParameterDomainError(
                f"cannot sweep {name!r}, expected one of {SWEEP_NAMES}")
        values = tuple(values)
        if not values:
            raise ParameterDomainError(f"sweep over {name} has no values")
        return super().__new__(cls, name, values)


@dataclass(frozen=True)
class ExperimentConfig:
    """The validated view of an experiment config dictionary

    Attributes:

    model_kinds: tuple of ModelKind
        the models to run
    omega_m, omega_c, g, n_tls, photon_cutoff: ModelParams fields
        photon_cutoff None selects N + 6 at every sweep point
    init: tuple of int
        (k_excitations, n_photons) of the initial product state
    t_max, dt, t0: float
        the sampling grid
    out_dir: str
        where artifacts are written
    sweep: SweepAxis
        an optional parameter axis
    num_parallel: int
        independent sweep points run as ray tasks when above one
    ode_check: bool
        also propagate with RK4 and report the largest state difference
    tensorboard: bool
        record traces and fits with polariton_beats.logger.Logger
    """

    model_kinds: Tuple[ModelKind, ...] = (ModelKind.TC, ModelKind.DM,
                                          ModelKind.PF)
    omega_m: float = 1.0
    omega_c: float = 1.0
    g: float = 0.07
    n_tls: int = 2
    photon_cutoff: Optional[int] = None
    init: Tuple[int, int] = (2, 0)
    t_max: float = 3000.0
    dt: float = 0.5
    t0: float = 0.0
    out_dir: str = "beat-lab"
    sweep: Optional[SweepAxis] = None
    num_parallel: int = 1
    ode_check: bool = False
    tensorboard: bool = False
    _params: ModelParams = field(default=None, init=False, repr=False,
                                 compare=False)

    def __post_init__(self):

        if isinstance(self.model_kinds, (str, ModelKind)):
            object.__setattr__(self, "model_kinds", (self.model_kinds,))
        kinds = tuple(ModelKind.parse(kind) for kind in self.model_kinds)
        if not kinds:
            raise ParameterDomainError("model_kinds must not be empty")
        object.__setattr__(self, "model_kinds", kinds)

        if len(self.init) != 2:
            raise ParameterDomainError(
                f"init must be [k_excitations, n_photons], got {self.init!r}")
        object.__setattr__(self, "init", tuple(int(i) for i in self.init))
        if isinstance(self.sweep, dict):
            object.__setattr__(self, "sweep", SweepAxis(**self.sweep))
        if int(self.num_parallel) < 1:
            raise ParameterDomainError(
                f"num_parallel must be >= 1, got {self.num_parallel}")

        object.__setattr__(self, "_params", ModelParams(
            omega_m=self.omega_m, omega_c=self.omega_c, g=self.g,
            n_tls=self.n_tls, photon_cutoff=self.photon_cutoff))
        try:
            TimeGrid.span(self.t_max, self.dt, t0=self.t0)
        except ContractError as error:
            raise ParameterDomainError(str(error)) from error
        basis_vector(self._params, *self.init)

    @property
    def params(self):
        return self._params

    @property
    def grid(self):
        return TimeGrid.span(self.t_max, self.dt, t0=self.t0)

    def initial_state(self):
        return basis_vector(self.params, *self.init)

    @classmethod
    def from_dict(cls, config):
        """Build a config from a dictionary, filling in defaults

        Args:

        config: dict
            keys from DEFAULT_CONFIG; unknown keys are rejected

        Returns:

        config: ExperimentConfig
            the validated configuration
        """

        unknown = set(config) - set(DEFAULT_CONFIG)
        if unknown:
            raise ParameterDomainError(
                f"unknown config keys {sorted(unknown)}")
        values = dict(DEFAULT_CONFIG)
        values.update(config)
        values["out_dir"] = str(values["out_dir"])
        return cls(**values)

    def to_dict(self):
        return {
            "model_kinds": [str(kind) for kind in self.model_kinds],
            "omega_m": self.omega_m,
            "omega_c": self.omega_c,
            "g": self.g,
            "n_tls": self.n_tls,
            "photon_cutoff": self.photon_cutoff,
            "init": list(self.init),
            "t_max": self.t_max,
            "dt": self.dt,
            "t0": self.t0,
            "out_dir": self.out_dir,
            "sweep": None if self.sweep is None else dict(
                name=self.sweep.name, values=list(self.sweep.values)),
            "num_parallel": self.num_parallel,
            "ode_check": self.ode_check,
            "tensorboard": self.tensorboard}

    def at(self, name, value):
        """The config of one sweep point"""

        if name == "detuning":
            return replace(self, omega_c=self.omega_m + value, sweep=None)
        if name not in SWEEP_NAMES:
            raise ParameterDomainError(f"cannot sweep {name!r}")
        return replace(self, sweep=None, **{name: value})

    def sweep_points(self):
        if self.sweep is None:
            return [self]
        return [self.at(self.sweep.name, value)
                for value in self.sweep.values]


def load_config(path):
    """Read a JSON config document into a dictionary"""

    with open(path, "r") as config_file:
        values = json.load(config_file)
    if not isinstance(values, dict):
        raise ParameterDomainError(
            f"config file {path} must hold a JSON object")
    return values


def resolve_config(file_values=None, overrides=None):
    """Merge defaults, file values and command line overrides in that
    order; overrides that are None are ignored"""

    values = dict(file_values or {})
    values.update({key: value for key, value in (overrides or {}).items()
                   if value is not None})
    return ExperimentConfig.from_dict(values)


def parse_init(text):
    """Parse a k,n initial state flag"""

    try:
        k, n = (int(part) for part in str(text).split(","))
    except ValueError:
        raise ParameterDomainError(
            f"--init expects k,n, got {text!r}") from None
    return [k, n]


def json_safe(value):
    """Convert numpy scalars, arrays, enums and non-finite floats into
    plain JSON values; infinities become the strings inf and -inf"""

    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return [json_safe(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return str(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def write_json(path, payload):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="\n") as json_file:
        json.dump(json_safe(payload), json_file, indent=2, sort_keys=True)
        json_file.write("\n")


def write_summary(path, payload):
    """Write a JSON summary; the wall-clock time lives under metadata so
    the data fields stay reproducible"""

    payload = dict(payload)
    payload["metadata"] = dict(
        created=datetime.datetime.now(datetime.timezone.utc).isoformat())
    write_json(path, payload)


def write_table(path, frame):
    """Write a pandas table as CSV with 12 significant digits and LF line
    endings"""

    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT)
    with open(path, "w", newline="\n") as csv_file:
        csv_file.write(text.replace("\r\n", "\n"))


def trace_frame(n_mean, n_var):
    return pd.DataFrame({"t": n_mean.times, "n_mean": n_mean.values,
                         "n_var": n_var.values},
                        columns=list(TRACE_COLUMNS))


def write_trace(path, n_mean, n_var):
    write_table(path, trace_frame(n_mean, n_var))


def read_table(path):
    return pd.read_csv(path)


def trace_path(out_dir, kind, point=None):
    """<out_dir>/<model>.csv, or <out_dir>/<model>_<name>=<value>.csv for
    a sweep point"""

    stem = str(ModelKind.parse(kind))
    if point is not None:
        stem += "_{}={}".format(point[0], FLOAT_FORMAT % point[1])
    return os.path.join(out_dir, stem + ".csv")
