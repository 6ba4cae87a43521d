from polariton_beats.errors import BeatLabError
import functools
import click


def model_options(fn):
    """The physical and output flags shared by every experiment command;
    flags override values read from --config"""

    options = [
        click.option('--config', 'config_file', type=click.Path(
            exists=True, dir_okay=False), default=None),
        click.option('--model', 'model_kinds', multiple=True,
                     type=click.Choice(['tc', 'dm', 'pf'])),
        click.option('--n-tls', type=int, default=None),
        click.option('--g', type=float, default=None),
        click.option('--omega-c', type=float, default=None),
        click.option('--omega-m', type=float, default=None),
        click.option('--cutoff', type=int, default=None),
        click.option('--t-max', type=float, default=None),
        click.option('--dt', type=float, default=None),
        click.option('--init', type=str, default=None),
        click.option('--out', type=str, default=None),
        click.option('--num-parallel', type=int, default=None)]
    for option in reversed(options):
        fn = option(fn)
    return fn


def resolve(config_file, model_kinds, n_tls, g, omega_c, omega_m, cutoff,
            t_max, dt, init, out, num_parallel, **extra):
    """Build the config dictionary of a command from --config and flags"""

    from polariton_beats.data import load_config, resolve_config
    from polariton_beats.data import parse_init

    file_values = load_config(config_file) if config_file else {}
    overrides = dict(
        model_kinds=list(model_kinds) or None, n_tls=n_tls, g=g,
        omega_c=omega_c, omega_m=omega_m, photon_cutoff=cutoff,
        t_max=t_max, dt=dt, init=None if init is None else parse_init(init),
        out_dir=out, num_parallel=num_parallel, **extra)
    return resolve_config(file_values, overrides).to_dict()


def parse_floats(text):
    return None if text is None else \
        [float(part) for part in text.split(',') if part.strip()]


def reports_errors(fn):
    """Turn library errors into a clean command line failure"""

    @functools.wraps(fn)
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except BeatLabError as error:
            raise click.ClickException(
                f"{type(error).__name__}: {error}") from error

    return wrapped


@click.group()
def cli():
    """Simulate photon-count beatings of the Tavis-Cummings, Dicke and
    Pauli-Fierz models and check them against perturbation theory
    """


@cli.command()
@model_options
@click.option('--g-values', type=str, default=None,
              help='comma separated couplings for schema.csv')
@reports_errors
def spectrum(g_values, **flags):
    """SEM polariton energies of each model, the energy schema
    """

    import os
    from polariton_beats.data import ExperimentConfig, write_json
    from polariton_beats.lab import energy_schema, predictions

    config = resolve(**flags)
    experiment = ExperimentConfig.from_dict(config)
    report = {str(kind): predictions(kind, experiment.params)
              for kind in experiment.model_kinds}
    for kind, values in report.items():
        print(kind, {k: v for k, v in values.items()
                     if k in ('e_minus', 'e_zero', 'e_plus',
                              'alpha_numeric')})
    write_json(os.path.join(experiment.out_dir, 'spectrum.json'),
               dict(config=config, triplets=report))

    if g_values is not None:
        config['g_values'] = parse_floats(g_values)
        table = energy_schema(config)
        print(table.to_string(index=False))


@cli.command()
@model_options
@click.option('--ode-check', is_flag=True, default=None)
@click.option('--tensorboard', is_flag=True, default=None)
@click.option('--sweep', type=str, default=None,
              help='name=v1,v2,... such as g=0.04,0.06')
@reports_errors
def propagate(ode_check, tensorboard, sweep, **flags):
    """Photon-count traces of every model as CSV with a JSON summary
    """

    from polariton_beats.lab import run_experiment

    axis = None
    if sweep is not None:
        name, _, values = sweep.partition('=')
        axis = dict(name=name.strip(), values=parse_floats(values))
        if axis['name'] in ('n_tls', 'photon_cutoff'):
            axis['values'] = [int(v) for v in axis['values']]
    run_experiment(resolve(ode_check=ode_check or None,
                           tensorboard=tensorboard or None,
                           sweep=axis, **flags))


@cli.command()
@model_options
@reports_errors
def beat(**flags):
    """Fit the beat of one trace and compare it with the predictions
    """

    import os
    from polariton_beats.data import ExperimentConfig, write_summary
    from polariton_beats.data import load_config
    from polariton_beats.spectral import photon_trace
    from polariton_beats.beats import extract_beat
    from polariton_beats.lab import predictions, overlay, CONVENTIONS

    # dm unless --model or the config file names a model
    named = flags['config_file'] and 'model_kinds' in load_config(
        flags['config_file'])
    if not flags['model_kinds'] and not named:
        flags['model_kinds'] = ('dm',)

    config = resolve(**flags)
    experiment = ExperimentConfig.from_dict(config)
    params = experiment.params
    kind = experiment.model_kinds[0]

    fit = extract_beat(photon_trace(
        kind, params, experiment.initial_state(), experiment.grid))
    report = dict(config=config, model=str(kind), beat=fit.to_dict(),
                  predictions=predictions(kind, params),
                  conventions=CONVENTIONS)
    if params.n_tls >= 2 and params.is_resonant and \
            experiment.init == (2, 0):
        report['overlay_sup_norm'] = overlay(config)['sup_norm']

    for key in ('omega_fit', 'alpha_fit', 'modulation_depth',
                'envelope_minimum'):
        print(f"{key}: {report['beat'][key]}")
    for key in ('alpha_pred', 'alpha_over_rabi', 't_beat'):
        if key in report['predictions']:
            print(f"{key}: {report['predictions'][key]}")
    write_summary(os.path.join(experiment.out_dir, 'beat.json'), report)


@cli.command(name='sweep-n')
@model_options
@click.option('--n-values', type=str, default='2,3,4,5,6,7,8,9,10,11,12,'
              '13,14,15')
@reports_errors
def sweep_n_command(n_values, **flags):
    """Beat frequency and period of the Dicke model across N
    """

    from polariton_beats.lab import sweep_n

    config = resolve(**flags)
    config['n_values'] = [int(v) for v in parse_floats(n_values)]
    table = sweep_n(config)
    print(table.to_string(index=False))


@cli.command()
@model_options
@click.option('--detunings', type=str, default=None,
              help='comma separated values of omega_c - omega_m')
@reports_errors
def detune(detunings, **flags):
    """Scan the detuning that cancels the Dicke beat
    """

    from polariton_beats.lab import detuning_scan

    config = resolve(**flags)
    config['detunings'] = parse_floats(detunings)
    report = detuning_scan(config)
    print(report['table'].to_string(index=False))
    print(f"best detuning: {report['best_detuning']:.6g} "
          f"(estimate {report['estimated_detuning']:.6g})")


@cli.command()
@click.option('--out', type=str, default='beat-lab-verify')
@click.option('--check', 'checks', multiple=True)
@click.pass_context
def verify(ctx, out, checks):
    """Run the acceptance checks and write verify.json
    """

    from polariton_beats.lab.acceptance import verify as run_checks

    results = run_checks(out, names=list(checks) or None)
    if not all(result.passed for result in results):
        ctx.exit(1)


@cli.command()
@click.option('--omega-c-ghz', type=float, default=6.0)
@click.option('--g-mhz', type=float, default=450.0)
@click.option('--n-tls', type=int, default=2)
@reports_errors
def convert(omega_c_ghz, g_mhz, n_tls):
    """Express the Rabi and beat periods in laboratory units
    """

    import json
    from polariton_beats.data import json_safe
    from polariton_beats.perturbation import unit_conversion

    report = unit_conversion(omega_c_ghz, g_mhz, n_tls)
    print(json.dumps(json_safe(report.to_dict()), indent=2, sort_keys=True))
