from ray import tune
import click
import ray
import os


@click.group()
def cli():
    """A group of presets that regenerate the data behind each figure of
    the beating study through ray tune
    """


def run_experiment_trial(config):
    from polariton_beats.lab import run_experiment
    run_experiment(config)


def energy_schema_trial(config):
    from polariton_beats.lab import energy_schema
    energy_schema(config)


def sweep_n_trial(config):
    from polariton_beats.lab import sweep_n
    sweep_n(config)


def overlay_trial(config):
    from polariton_beats.lab import overlay
    overlay(config)


def alpha_scaling_trial(config):
    from polariton_beats.lab import alpha_scaling
    alpha_scaling(config)


def detuning_trial(config):
    from polariton_beats.lab import detuning_scan
    detuning_scan(config)


def launch(trial, config, local_dir, cpus, num_parallel):
    ray.init(num_cpus=cpus,
             include_dashboard=False,
             _temp_dir=os.path.expanduser('~/tmp'))
    tune.run(trial, config=config,
             local_dir=local_dir,
             resources_per_trial={'cpu': max(cpus // num_parallel, 1)})


#############


@cli.command()
@click.option('--local-dir', type=str, default='beat-lab-fig1')
@click.option('--cpus', type=int, default=3)
@click.option('--num-parallel', type=int, default=3)
def fig1(local_dir, cpus, num_parallel):
    """Photon counts of TC, DM and PF at N = 2, g = 0.07
    """

    launch(run_experiment_trial, {
        "model_kinds": tune.grid_search([["tc"], ["dm"], ["pf"]]),
        "n_tls": 2,
        "g": 0.07,
        "init": [2, 0],
        "t_max": 3000.0,
        "dt": 0.5,
        "out_dir": "data",
        "ode_check": True,
        "tensorboard": True}, local_dir, cpus, num_parallel)


@cli.command()
@click.option('--local-dir', type=str, default='beat-lab-schema')
@click.option('--cpus', type=int, default=3)
@click.option('--num-parallel', type=int, default=3)
def schema(local_dir, cpus, num_parallel):
    """SEM energy schema of the three models against the coupling
    """

    launch(energy_schema_trial, {
        "model_kinds": tune.grid_search([["tc"], ["dm"], ["pf"]]),
        "n_tls": 2,
        "g_values": [round(0.01 * i, 2) for i in range(1, 13)],
        "out_dir": "data"}, local_dir, cpus, num_parallel)


@cli.command()
@click.option('--local-dir', type=str, default='beat-lab-fig3b')
@click.option('--cpus', type=int, default=1)
@click.option('--num-parallel', type=int, default=1)
@click.option('--t-max', type=float, default=3000.0)
def fig3b(local_dir, cpus, num_parallel, t_max):
    """Beating period of the Dicke model for N = 2 ... 15
    """

    launch(sweep_n_trial, {
        "model_kinds": ["dm"],
        "g": 0.07,
        "n_values": list(range(2, 16)),
        "t_max": t_max,
        "dt": 0.5,
        "out_dir": "data",
        "num_parallel": 1}, local_dir, cpus, num_parallel)


@cli.command()
@click.option('--local-dir', type=str, default='beat-lab-fig4')
@click.option('--cpus', type=int, default=3)
@click.option('--num-parallel', type=int, default=3)
def fig4(local_dir, cpus, num_parallel):
    """Exact and approximate Dicke photon counts for N = 2, 3 and 5
    """

    launch(overlay_trial, {
        "model_kinds": ["dm"],
        "n_tls": tune.grid_search([2, 3, 5]),
        "g": 0.07,
        "t_max": 3000.0,
        "dt": 0.5,
        "out_dir": "data"}, local_dir, cpus, num_parallel)


@cli.command()
@click.option('--local-dir', type=str, default='beat-lab-scaling')
@click.option('--cpus', type=int, default=1)
@click.option('--num-parallel', type=int, default=1)
def scaling(local_dir, cpus, num_parallel):
    """Power law of the Dicke beat frequency in the coupling
    """

    launch(alpha_scaling_trial, {
        "model_kinds": ["dm"],
        "n_tls": 2,
        "g_values": [0.04, 0.06, 0.08],
        "t_max": 8000.0,
        "dt": 1.0,
        "out_dir": "data"}, local_dir, cpus, num_parallel)


@cli.command()
@click.option('--local-dir', type=str, default='beat-lab-detuning')
@click.option('--cpus', type=int, default=2)
@click.option('--num-parallel', type=int, default=2)
def detuning(local_dir, cpus, num_parallel):
    """Detuning that cancels the Dicke beat for N = 2 and 3
    """

    launch(detuning_trial, {
        "model_kinds": ["dm"],
        "n_tls": tune.grid_search([2, 3]),
        "g": 0.07,
        "t_max": 3000.0,
        "dt": 0.5,
        "out_dir": "data"}, local_dir, cpus, num_parallel)
