"""Experiment drivers that turn a config dictionary into artifacts

Every driver has the signature fn(config: dict) so it can be launched
directly or through ray.tune.run. Independent points run as ray tasks when
num_parallel > 1 and the calling process is the only one that writes files.
"""

from polariton_beats import errors
from polariton_beats.basis import basis_vector
from polariton_beats.hamiltonians import ModelKind, build_hamiltonian
from polariton_beats.spectral import diagonalize, propagate_spectral
from polariton_beats.spectral import propagate_ode, photon_statistics
from polariton_beats.spectral import excitation_drift, convergence_check
from polariton_beats.spectral import photon_trace
from polariton_beats.sem import numeric_triplet
from polariton_beats.perturbation import alpha_prediction, alpha_over_rabi
from polariton_beats.perturbation import beating_period, cancelling_detuning
from polariton_beats.perturbation import dm_photon_count_approx
from polariton_beats.beats import extract_beat
from polariton_beats.data import ExperimentConfig, DEFAULT_CONFIG
from polariton_beats.data import write_trace, write_table, write_json
from polariton_beats.data import write_summary, trace_path
from polariton_beats.utils import TimeGrid, expectation, sup_norm
from polariton_beats.utils import loglog_slope
import builtins
import functools
import warnings
import os
import numpy as np
import pandas as pd
import tqdm


# the depth below which a trace counts as beat-free
BEAT_FREE_DEPTH = 0.02


CONVENTIONS = {
    "energy_origin": "Hamiltonians are built as written; triplet energies "
                     "are shifted by +N omega_m / 2 for TC and by minus the "
                     "numerical ground energy for DM and PF",
    "crw_prefactor": "g / sqrt(N) on J+ a^dag + J- a",
    "jx": "J_x = J_+ + J_-",
    "fem_denominator": "E_i - 4 omega replaced by -2 omega",
    "ground_shift": "alpha_pred uses the equal ground shift g^2 / (4 omega)",
    "hybrid_normalization": "mixed reconstructions are renormalized per "
                            "sample",
    "modulation_depth": "(max e - min e) / (max e + min e) with "
                        "e = |cos(alpha_fit t)| over the trace window",
    "detuning": "omega_c = omega_m + detuning",
    "photon_cutoff": "N + 6 unless given"}


def split_config(config, **extras):
    """Separate driver-specific keys from the experiment keys

    Args:

    config: dict or ExperimentConfig
        the config passed to a driver
    extras: dict
        the driver-specific keys and their defaults

    Returns:

    experiment: ExperimentConfig
        the validated experiment part
    options: dict
        the driver-specific values
    """

    if isinstance(config, ExperimentConfig):
        return config, dict(extras)
    config = dict(config)
    options = {key: config.pop(key, default)
               for key, default in extras.items()}
    return ExperimentConfig.from_dict(config), options


def captures_warnings(fn):
    """Run fn and return its result with the warnings it raised"""

    @functools.wraps(fn)
    def wrapped(*args, **kwargs):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = fn(*args, **kwargs)
        return result, [(w.category.__name__, str(w.message))
                        for w in caught]

    return wrapped


def reemit(records):
    for name, message in records:
        category = getattr(errors, name, None) or \
            getattr(builtins, name, UserWarning)
        warnings.warn(message, category, stacklevel=3)


def parallel_map(fn, items, num_parallel=1, desc=None):
    """Evaluate fn on every item, as ray tasks when num_parallel > 1

    Warnings raised inside fn are re-emitted in the calling process and
    returned next to each result.

    Returns:

    results: list of tuple
        (result, warning records) in the order of items
    """

    task = captures_warnings(fn)
    if num_parallel <= 1:
        outputs = [task(item) for item in tqdm.tqdm(items, desc=desc)]
    else:
        import ray
        if not ray.is_initialized():
            ray.init(num_cpus=num_parallel,
                     include_dashboard=False,
                     _temp_dir=os.path.expanduser('~/tmp'))
        remote = ray.remote(task)
        futures = [remote.remote(item) for item in items]
        outputs = [ray.get(future) for future in tqdm.tqdm(futures, desc=desc)]
    for _, records in outputs:
        reemit(records)
    return outputs


def simulate(kind, experiment):
    """Propagate the initial state of an experiment under one model

    Returns:

    n_mean: ObservableTrace
        <a^dag a>(t)
    n_var: ObservableTrace
        the photon number variance
    diagnostics: dict
        norm, energy and excitation drifts, the convergence report and,
        when requested, the RK4 cross-check
    """

    params, grid = experiment.params, experiment.grid
    psi0 = experiment.initial_state()
    hamiltonian = build_hamiltonian(kind, params)
    states = propagate_spectral(diagonalize(hamiltonian), psi0, grid)
    n_mean, n_var = photon_statistics(states, params, grid)
    energies = expectation(states, hamiltonian).real

    diagnostics = dict(
        norm_drift=float(np.max(np.abs(
            np.linalg.norm(states, axis=1) - 1.0))),
        energy_drift=float(np.max(np.abs(energies - energies[0]))),
        excitation_drift=excitation_drift(states, params),
        convergence=convergence_check(kind, params, psi0, grid)._asdict())
    if experiment.ode_check:
        diagnostics["ode_difference"] = sup_norm(
            propagate_ode(hamiltonian, psi0, grid), states)
    return n_mean, n_var, diagnostics


def predictions(kind, params):
    """Closed-form and perturbative numbers that accompany a run"""

    report = {}
    if params.n_tls < 2 or params.photon_cutoff < 2:
        return report
    try:
        triplet = numeric_triplet(kind, params)
        report.update(e_minus=triplet.e_minus, e_zero=triplet.e_zero,
                      e_plus=triplet.e_plus, alpha_numeric=triplet.alpha)
    except errors.MatchingError as error:
        report["triplet_error"] = str(error)
    report["t_beat"] = beating_period(params)
    if params.is_resonant:
        report.update(alpha_pred=alpha_prediction(params),
                      alpha_over_rabi=alpha_over_rabi(params),
                      cancelling_detuning=cancelling_detuning(params))
    return report


def fit_report(trace):
    try:
        return extract_beat(trace).to_dict()
    except (errors.ContractError, errors.FitError) as error:
        return dict(error=f"{type(error).__name__}: {error}")


def _run_point(item):
    kind, experiment = item
    n_mean, n_var, diagnostics = simulate(kind, experiment)
    return dict(n_mean=n_mean, n_var=n_var, diagnostics=diagnostics,
                beat=fit_report(n_mean),
                predictions=predictions(kind, experiment.params))


def run_experiment(config):
    """Run every model at every sweep point and write the artifacts

    Writes one CSV per (model, sweep point) with header t,n_mean,n_var,
    params.json with the resolved config and summary.json with the
    energies, predictions, fits and diagnostics of every run.

    Args:

    config: dict
        an experiment config, see polariton_beats.data.DEFAULT_CONFIG

    Returns:

    summary: dict
        the content of summary.json
    """

    experiment, _ = split_config(config)
    out_dir = experiment.out_dir
    os.makedirs(out_dir, exist_ok=True)
    write_json(os.path.join(out_dir, "params.json"), experiment.to_dict())

    axis = experiment.sweep
    points = experiment.sweep_points()
    values = axis.values if axis is not None else [None]
    items = [(kind, point) for point in points
             for kind in experiment.model_kinds]
    labels = [(kind, value) for value in values
              for kind in experiment.model_kinds]

    outputs = parallel_map(_run_point, items,
                           num_parallel=experiment.num_parallel,
                           desc="run_experiment")

    logger = None
    if experiment.tensorboard:
        from polariton_beats.logger import Logger
        logger = Logger(os.path.join(out_dir, "logs"))

    runs = []
    for step, ((kind, value), (_, point), (result, records)) in enumerate(
            zip(labels, items, outputs)):
        coordinate = None if axis is None else (axis.name, value)
        path = trace_path(out_dir, kind, coordinate)
        write_trace(path, result["n_mean"], result["n_var"])

        # convergence failures arrive as ConvergenceWarning records
        runs.append(dict(
            model=str(kind), sweep_point=coordinate,
            params=point.params.to_dict(), trace=os.path.basename(path),
            beat=result["beat"], predictions=result["predictions"],
            diagnostics=result["diagnostics"],
            warnings=[dict(category=c, message=m) for c, m in records]))

        if logger is not None:
            key = str(kind) if coordinate is None else \
                f"{kind}/{axis.name}={value}"
            logger.record_trace(key + "/n_mean", result["n_mean"])
            logger.record_trace(key + "/n_var", result["n_var"])
            for name in ("omega_fit", "alpha_fit", "modulation_depth"):
                if name in result["beat"]:
                    logger.record(key + "/" + name,
                                  result["beat"][name], step)

        print(f"{kind}: {os.path.basename(path)} "
              f"depth={result['beat'].get('modulation_depth', float('nan')):.4g}")

    summary = dict(config=experiment.to_dict(), conventions=CONVENTIONS,
                   runs=runs)
    write_summary(os.path.join(out_dir, "summary.json"), summary)
    return summary


def beat_free(fit):
    return fit.modulation_depth < BEAT_FREE_DEPTH


def single_manifold_check(params, kind=ModelKind.DM, grid=None):
    """Propagate |s_1, 0> and test that the trace shows no beating

    Args:

    params: ModelParams
        the model parameters, N >= 1
    kind: ModelKind or str
        the model to propagate
    grid: TimeGrid
        the sampling times, [0, 3000] at dt = 0.5 when None

    Returns:

    report: dict
        the fit and whether its modulation depth is below 0.02; a failure
        is a finding about the physics, so it is reported and not raised
    """

    grid = TimeGrid.span(3000.0, 0.5) if grid is None else grid
    trace = photon_trace(kind, params, basis_vector(params, 1, 0), grid)
    fit = extract_beat(trace)
    return dict(model=str(ModelKind.parse(kind)), n_tls=params.n_tls,
                g=params.g, modulation_depth=fit.modulation_depth,
                alpha_fit=fit.alpha_fit, omega_fit=fit.omega_fit,
                threshold=BEAT_FREE_DEPTH, passed=beat_free(fit))


def _fit_model(item):
    kind, experiment = item
    trace = photon_trace(kind, experiment.params,
                         experiment.initial_state(), experiment.grid)
    return extract_beat(trace)


def _sweep_n_row(experiment):
    params = experiment.params
    row = dict(N=params.n_tls, alpha_pred=np.nan, alpha_fit=np.nan,
               t_beat=np.nan, modulation_depth=np.nan, error="")
    try:
        row.update(alpha_pred=alpha_prediction(params),
                   t_beat=beating_period(params))
        fit = _fit_model((ModelKind.DM, experiment))
        row.update(alpha_fit=fit.alpha_fit,
                   modulation_depth=fit.modulation_depth)
    except errors.BeatLabError as error:
        row["error"] = f"{type(error).__name__}: {error}"
    return row


def sweep_n(config):
    """Beat frequency and period of the Dicke model across emitter counts

    Args:

    config: dict
        an experiment config; n_values (default 2..15) lists the emitter
        counts and every other key is shared by all rows

    Returns:

    table: pd.DataFrame
        columns N, alpha_pred, alpha_fit, t_beat, modulation_depth and
        error, also written to sweep_n.csv
    """

    experiment, options = split_config(
        config, n_values=list(range(2, 16)))
    points = [experiment.at("n_tls", int(n)) for n in options["n_values"]]
    outputs = parallel_map(_sweep_n_row, points,
                           num_parallel=experiment.num_parallel,
                           desc="sweep_n")
    table = pd.DataFrame([row for row, _ in outputs], columns=[
        "N", "alpha_pred", "alpha_fit", "t_beat", "modulation_depth",
        "error"])
    write_table(os.path.join(experiment.out_dir, "sweep_n.csv"), table)
    return table


def default_detunings(params, count=17):
    """count detunings symmetric about zero spanning twice the cancelling
    detuning on either side"""

    estimate = abs(cancelling_detuning(params))
    span = 2.0 * (estimate if estimate > 0 else 1e-3)
    return list(np.linspace(-span, span, count))


def detuning_scan(config):
    """Scan the cavity detuning for the Dicke model and the TC model

    The Dicke rows look for the detuning whose TC-like asymmetry cancels
    the CRW asymmetry; the TC rows show that detuning alone produces beats.

    Args:

    config: dict
        an experiment config at resonance; detunings lists the values of
        omega_c - omega_m and defaults to default_detunings

    Returns:

    report: dict
        the table (also written to detuning.csv), the scanned minimizer,
        the first-order estimate and the resonant Dicke depth
    """

    experiment, options = split_config(config, detunings=None)
    resonant = experiment.params.replace(omega_c=experiment.omega_m)
    detunings = options["detunings"]
    if detunings is None:
        detunings = default_detunings(resonant)

    items = [(ModelKind.DM, experiment.at("detuning", float(d)))
             for d in detunings]
    items += [(ModelKind.TC, experiment.at("detuning", float(d)))
              for d in detunings if d != 0]
    outputs = parallel_map(_fit_model, items,
                           num_parallel=experiment.num_parallel,
                           desc="detuning_scan")

    table = pd.DataFrame([dict(
        detuning=point.omega_c - point.omega_m, model=str(kind),
        modulation_depth=fit.modulation_depth, alpha_fit=fit.alpha_fit,
        omega_fit=fit.omega_fit)
        for (kind, point), (fit, _) in zip(items, outputs)], columns=[
            "detuning", "model", "modulation_depth", "alpha_fit",
            "omega_fit"])
    write_table(os.path.join(experiment.out_dir, "detuning.csv"), table)

    dicke = table[table.model == str(ModelKind.DM)]
    best = dicke.loc[dicke.modulation_depth.idxmin()]
    at_zero = dicke[np.isclose(dicke.detuning, 0.0, rtol=0.0,
                               atol=1e-15)]
    report = dict(
        best_detuning=float(best.detuning),
        best_modulation_depth=float(best.modulation_depth),
        estimated_detuning=cancelling_detuning(resonant),
        resonant_modulation_depth=float(at_zero.modulation_depth.iloc[0])
        if len(at_zero) else None,
        table=table)
    write_json(os.path.join(experiment.out_dir, "detuning.json"),
               {k: v for k, v in report.items() if k != "table"})
    return report


def _schema_rows(item):
    kind, params = item
    try:
        triplet = numeric_triplet(kind, params)
        return dict(g=params.g, model=str(kind), e_minus=triplet.e_minus,
                    e_zero=triplet.e_zero, e_plus=triplet.e_plus,
                    alpha=triplet.alpha)
    except errors.MatchingError:
        return dict(g=params.g, model=str(kind), e_minus=np.nan,
                    e_zero=np.nan, e_plus=np.nan, alpha=np.nan)


def energy_schema(config):
    """SEM polariton energies of every model across couplings

    Args:

    config: dict
        an experiment config; g_values lists the couplings

    Returns:

    table: pd.DataFrame
        columns g, model, e_minus, e_zero, e_plus, alpha, also written to
        schema.csv; rows whose matching is ambiguous hold NaN
    """

    experiment, options = split_config(
        config, g_values=list(np.round(np.arange(0.01, 0.1201, 0.01), 4)))
    items = [(kind, experiment.params.replace(g=float(g)))
             for g in options["g_values"] for kind in experiment.model_kinds]
    outputs = parallel_map(_schema_rows, items,
                           num_parallel=experiment.num_parallel,
                           desc="energy_schema")
    table = pd.DataFrame([row for row, _ in outputs], columns=[
        "g", "model", "e_minus", "e_zero", "e_plus", "alpha"])
    write_table(os.path.join(experiment.out_dir, "schema.csv"), table)
    return table


def overlay(config):
    """The full Dicke photon count next to its approximate closed form

    Args:

    config: dict
        a resonant experiment config starting from |s_2, 0>

    Returns:

    report: dict
        the table written to overlay_N<N>.csv (t, n_exact, n_approx) and
        the sup-norm gap between the two columns
    """

    experiment, _ = split_config(config)
    params, grid = experiment.params, experiment.grid
    exact = photon_trace(ModelKind.DM, params,
                         basis_vector(params, 2, 0), grid)
    approx = dm_photon_count_approx(params, grid.times)
    table = pd.DataFrame({"t": grid.times, "n_exact": exact.values,
                          "n_approx": approx},
                         columns=["t", "n_exact", "n_approx"])
    write_table(os.path.join(
        experiment.out_dir, f"overlay_N{params.n_tls}.csv"), table)
    return dict(table=table, sup_norm=sup_norm(exact.values, approx),
                alpha_pred=alpha_prediction(params))


def alpha_scaling(config):
    """Fit the power law alpha_fit ~ g^p of the Dicke beat frequency

    Args:

    config: dict
        an experiment config; g_values lists the couplings

    Returns:

    report: dict
        the fitted exponent and the per-coupling fits, also written to
        alpha_scaling.csv
    """

    experiment, options = split_config(config, g_values=[0.04, 0.06, 0.08])
    items = [(ModelKind.DM, experiment.at("g", float(g)))
             for g in options["g_values"]]
    outputs = parallel_map(_fit_model, items,
                           num_parallel=experiment.num_parallel,
                           desc="alpha_scaling")
    table = pd.DataFrame([dict(
        g=point.g, alpha_fit=fit.alpha_fit,
        alpha_pred=alpha_prediction(point.params), omega_fit=fit.omega_fit)
        for (_, point), (fit, _) in zip(items, outputs)],
        columns=["g", "alpha_fit", "alpha_pred", "omega_fit"])
    write_table(os.path.join(experiment.out_dir, "alpha_scaling.csv"), table)
    return dict(exponent=loglog_slope(table.g, table.alpha_fit), table=table)


__all__ = ["run_experiment", "sweep_n", "detuning_scan",
           "single_manifold_check", "energy_schema", "overlay",
           "alpha_scaling", "simulate", "parallel_map", "CONVENTIONS",
           "DEFAULT_CONFIG"]
