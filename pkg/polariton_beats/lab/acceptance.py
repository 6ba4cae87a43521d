"""Named numerical checks of the simulator against its closed forms

Each check returns a CheckResult holding the measured value, the threshold
it is compared against and whether it passed. verify runs a selection of
checks and writes verify.json.
"""

from polariton_beats.basis import ModelParams, basis_vector
from polariton_beats.hamiltonians import ModelKind, build_hamiltonian
from polariton_beats.spectral import diagonalize, propagate_spectral
from polariton_beats.spectral import propagate_ode, photon_trace
from polariton_beats.spectral import hybrid_propagate, HybridSpec
from polariton_beats.sem import numeric_triplet, rabi_frequency
from polariton_beats.sem import tc_photon_count, tc_photon_peak
from polariton_beats.perturbation import fem_shift_sum, fem_shift_zero_closed
from polariton_beats.perturbation import fem_shift_pm_closed
from polariton_beats.perturbation import perturbed_energies, beating_period
from polariton_beats.perturbation import dm_photon_count_approx
from polariton_beats.perturbation import alpha_prediction, unit_conversion
from polariton_beats.beats import extract_beat
from polariton_beats.lab import single_manifold_check, alpha_scaling
from polariton_beats.lab import BEAT_FREE_DEPTH
from polariton_beats.data import write_json
from polariton_beats.utils import TimeGrid, expectation, sup_norm
from collections import namedtuple, OrderedDict
import math
import os
import numpy as np


CheckResult = namedtuple("CheckResult", [
    "name", "value", "threshold", "passed", "detail"])


REFERENCE = ModelParams(omega_m=1.0, omega_c=1.0, g=0.07, n_tls=2)
FIG1_GRID = TimeGrid.span(3000.0, 0.5)
N_RANGE = range(2, 16)


def _depth(kind, params, grid=FIG1_GRID):
    trace = photon_trace(kind, params, basis_vector(params, 2, 0), grid)
    return extract_beat(trace)


def tc_closed_form():
    """The resonant TC photon count equals its closed form"""

    params = REFERENCE
    trace = photon_trace(ModelKind.TC, params,
                         basis_vector(params, 2, 0), FIG1_GRID)
    error = sup_norm(trace.values, tc_photon_count(params, trace.times))

    peak_time = math.pi / rabi_frequency(params)
    at_peak = photon_trace(ModelKind.TC, params, basis_vector(params, 2, 0),
                           TimeGrid(peak_time, 1.0, 2)).values[0]
    peak_error = abs(at_peak - 16.0 / 9.0)
    return CheckResult(
        "tc_closed_form", error, 1e-10, error < 1e-10 and peak_error < 1e-9,
        dict(peak=at_peak, peak_error=peak_error,
             peak_bound=tc_photon_peak(params.n_tls)))


def resonant_triplet_energies():
    """Numerical TC SEM energies equal 2 omega and 2 omega +- Omega"""

    worst, worst_alpha = 0.0, 0.0
    for n in N_RANGE:
        params = REFERENCE.replace(n_tls=n, photon_cutoff=None)
        triplet = numeric_triplet(ModelKind.TC, params)
        big_omega = params.g * math.sqrt(2.0 * (2 * n - 1) / n)
        expected = (2.0 - big_omega, 2.0, 2.0 + big_omega)
        worst = max(worst, float(np.max(np.abs(
            np.subtract(triplet.energies, expected)))))
        worst_alpha = max(worst_alpha, abs(triplet.alpha))
    return CheckResult(
        "resonant_triplet", worst, 1e-12,
        worst < 1e-12 and worst_alpha < 1e-12, dict(max_alpha=worst_alpha))


def perturbation_consistency():
    """Explicit FEM sums equal their closed forms and the assembled alpha
    approaches the predicted alpha to order g^4"""

    worst_sum, worst_alpha = 0.0, 0.0
    for n in N_RANGE:
        params = REFERENCE.replace(n_tls=n, photon_cutoff=None)
        worst_sum = max(
            worst_sum,
            abs(fem_shift_sum(params, "zero") - fem_shift_zero_closed(params)),
            abs(fem_shift_sum(params, "plus") - fem_shift_pm_closed(params)),
            abs(fem_shift_sum(params, "minus") - fem_shift_pm_closed(params)))
        energies = perturbed_energies(params)
        worst_alpha = max(worst_alpha, abs(
            energies.alpha_assembled - energies.alpha_pred) / params.g ** 2)
    bound = 5.0 * REFERENCE.g ** 2
    return CheckResult(
        "perturbation_consistency", worst_sum, 1e-12,
        worst_sum < 1e-12 and worst_alpha < bound,
        dict(scaled_alpha_deviation=worst_alpha, alpha_bound=bound))


def dicke_beat():
    """The Dicke beat frequency and envelope minimum at N = 2"""

    fit = _depth(ModelKind.DM, REFERENCE)
    predicted = alpha_prediction(REFERENCE)
    deviation = abs(fit.alpha_fit - abs(predicted)) / abs(predicted)
    inside = fit.envelope_minimum is not None and \
        1150.0 <= fit.envelope_minimum <= 1450.0
    return CheckResult(
        "dicke_beat", deviation, 0.3, deviation <= 0.3 and inside,
        dict(alpha_fit=fit.alpha_fit, alpha_pred=predicted,
             envelope_minimum=fit.envelope_minimum))


def five_emitter_null():
    """No beating at N = 5"""

    reference = _depth(ModelKind.DM, REFERENCE).modulation_depth
    params = REFERENCE.replace(n_tls=5, photon_cutoff=None)
    depth = _depth(ModelKind.DM, params).modulation_depth
    period = beating_period(params)
    return CheckResult(
        "five_emitter_null", depth, 0.15 * reference,
        depth < 0.15 * reference and math.isinf(period),
        dict(reference_depth=reference, t_beat=period))


def beat_period_shape():
    """T_beat diverges at N = 5 and is smallest at N = 10 beyond it"""

    periods = {n: beating_period(REFERENCE.replace(
        n_tls=n, photon_cutoff=None)) for n in N_RANGE}
    argmin = min((n for n in periods if n > 5), key=periods.get)
    return CheckResult(
        "beat_period_shape", argmin, 10,
        math.isinf(periods[5]) and argmin == 10, dict(t_beat=periods))


def hybrid_dichotomy():
    """Eigenvalues carry the beat and eigenvectors do not"""

    psi0 = basis_vector(REFERENCE, 2, 0)
    full = extract_beat(photon_trace(
        ModelKind.DM, REFERENCE, psi0, FIG1_GRID)).modulation_depth
    with_values = extract_beat(hybrid_propagate(
        HybridSpec("tc", "tc", "dm"), REFERENCE, psi0,
        FIG1_GRID)).modulation_depth
    with_vectors = extract_beat(hybrid_propagate(
        HybridSpec("dm", "dm", "tc"), REFERENCE, psi0,
        FIG1_GRID)).modulation_depth
    relative = abs(with_values - full) / full
    return CheckResult(
        "hybrid_dichotomy", relative, 0.3,
        relative <= 0.3 and with_vectors < 0.1 * full,
        dict(dicke_depth=full, dicke_eigenvalues_depth=with_values,
             dicke_eigenvectors_depth=with_vectors))


# PF and DM traces share their early history; later their carriers drift
# apart at second order in g even though |alpha| agrees
AGREEMENT_WINDOW = 800.0
GAP_WINDOWS = (500.0, 800.0, 1000.0, 1200.0, 2000.0, 3000.0)


def model_agreement():
    """PF follows DM early and beats with the same |alpha|, resonant TC
    does not beat

    The sup-norm gap of the PF and DM traces is bounded by 0.05 only up to
    t = AGREEMENT_WINDOW; the gaps over longer windows are reported in the
    detail without a bound.
    """

    psi0 = basis_vector(REFERENCE, 2, 0)
    pf = photon_trace(ModelKind.PF, REFERENCE, psi0, FIG1_GRID)
    dm = photon_trace(ModelKind.DM, REFERENCE, psi0, FIG1_GRID)
    gaps = {f"{t:g}": sup_norm(pf.values[pf.times <= t],
                                dm.values[dm.times <= t])
            for t in GAP_WINDOWS}
    early = gaps[f"{AGREEMENT_WINDOW:g}"]

    pf_fit, dm_fit = extract_beat(pf), extract_beat(dm)
    mismatch = abs(pf_fit.alpha_fit - dm_fit.alpha_fit) / dm_fit.alpha_fit \
        if dm_fit.alpha_fit > 0 else math.inf
    minima = (pf_fit.envelope_minimum, dm_fit.envelope_minimum)
    same_minimum = None not in minima and \
        abs(minima[0] - minima[1]) <= 0.1 * minima[1]
    tc_depth = _depth(ModelKind.TC, REFERENCE).modulation_depth
    return CheckResult(
        "model_agreement", mismatch, 0.1,
        mismatch <= 0.1 and same_minimum and early < 0.05 and
        tc_depth < BEAT_FREE_DEPTH,
        dict(early_gap=early, early_window=AGREEMENT_WINDOW,
             gap_up_to=gaps, pf_alpha_fit=pf_fit.alpha_fit,
             dm_alpha_fit=dm_fit.alpha_fit, pf_envelope_minimum=minima[0],
             dm_envelope_minimum=minima[1], tc_modulation_depth=tc_depth))


def approximate_count_identity():
    """The approximate Dicke count with alpha = 0 is the exact TC count"""

    times = np.linspace(0.0, 3000.0, 10000)
    error = sup_norm(dm_photon_count_approx(REFERENCE, times, alpha=0.0),
                     tc_photon_count(REFERENCE, times))
    return CheckResult("approximate_count_identity", error, 1e-12,
                       error < 1e-12, {})


def propagator_agreement():
    """RK4 and spectral propagation agree and conserve norm and energy"""

    grid = TimeGrid.span(2000.0, 0.5)
    worst, worst_norm, worst_energy = 0.0, 0.0, 0.0
    for kind in ModelKind:
        hamiltonian = build_hamiltonian(kind, REFERENCE)
        psi0 = basis_vector(REFERENCE, 2, 0)
        spectral = propagate_spectral(diagonalize(hamiltonian), psi0, grid)
        ode = propagate_ode(hamiltonian, psi0, grid)
        worst = max(worst, sup_norm(spectral, ode))
        worst_norm = max(worst_norm, float(np.max(np.abs(
            np.linalg.norm(spectral, axis=1) - 1.0))))
        energy = expectation(ode, hamiltonian).real
        worst_energy = max(worst_energy,
                           float(np.max(np.abs(energy - energy[0]))))
    return CheckResult(
        "propagator_agreement", worst, 1e-6,
        worst < 1e-6 and worst_norm < 1e-10 and worst_energy < 1e-8,
        dict(norm_drift=worst_norm, energy_drift=worst_energy))


def single_excitation_null():
    """Single-excitation Dicke dynamics do not beat"""

    reports = [single_manifold_check(REFERENCE.replace(
        n_tls=n, photon_cutoff=None)) for n in (2, 5)]
    depth = max(report["modulation_depth"] for report in reports)
    return CheckResult(
        "single_excitation_null", depth, BEAT_FREE_DEPTH,
        all(report["passed"] for report in reports), dict(runs=reports))


def scaling_law(out_dir):
    """alpha_fit grows as g^2"""

    report = alpha_scaling(dict(
        model_kinds=["dm"], n_tls=2, t_max=8000.0, dt=1.0,
        out_dir=os.path.join(out_dir, "scaling"),
        g_values=[0.04, 0.06, 0.08]))
    exponent = report["exponent"]
    return CheckResult(
        "scaling_law", exponent, 0.15, abs(exponent - 2.0) <= 0.15,
        dict(alpha_fit=list(report["table"].alpha_fit)))


def unit_ratio():
    """6 GHz and 450 MHz give g / omega_c = 0.075"""

    report = unit_conversion(6.0, 450.0, 2)
    return CheckResult(
        "unit_conversion", report.g_over_omega, 0.075,
        report.g_over_omega == 0.075, report.to_dict())


CHECKS = OrderedDict([
    ("tc_closed_form", tc_closed_form),
    ("resonant_triplet", resonant_triplet_energies),
    ("perturbation_consistency", perturbation_consistency),
    ("dicke_beat", dicke_beat),
    ("five_emitter_null", five_emitter_null),
    ("beat_period_shape", beat_period_shape),
    ("hybrid_dichotomy", hybrid_dichotomy),
    ("model_agreement", model_agreement),
    ("approximate_count_identity", approximate_count_identity),
    ("propagator_agreement", propagator_agreement),
    ("single_excitation_null", single_excitation_null),
    ("scaling_law", scaling_law),
    ("unit_conversion", unit_ratio)])


def verify(out_dir, names=None):
    """Run acceptance checks and write verify.json

    Args:

    out_dir: str
        the directory that receives verify.json and scratch artifacts
    names: list of str
        the checks to run, all of CHECKS when None

    Returns:

    results: list of CheckResult
        one entry per check in the order they ran
    """

    names = list(CHECKS) if names is None else list(names)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks {unknown}, expected {list(CHECKS)}")

    results = []
    for name in names:
        check = CHECKS[name]
        result = check(out_dir) if name == "scaling_law" else check()
        print(f"{'PASS' if result.passed else 'FAIL'} {name}: "
              f"{result.value!r} (threshold {result.threshold!r})")
        results.append(result)

    write_json(os.path.join(out_dir, "verify.json"), dict(
        passed=all(r.passed for r in results),
        checks=[r._asdict() for r in results]))
    return results
