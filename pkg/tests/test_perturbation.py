from polariton_beats.basis import ModelParams
from polariton_beats.hamiltonians import ModelKind
from polariton_beats.sem import numeric_triplet, tc_photon_count
from polariton_beats.sem import rabi_frequency
from polariton_beats.perturbation import ground_shift, fem_shift_sum
from polariton_beats.perturbation import fem_shift_zero_closed
from polariton_beats.perturbation import fem_shift_pm_closed
from polariton_beats.perturbation import alpha_prediction, perturbed_energies
from polariton_beats.perturbation import dm_photon_count_approx
from polariton_beats.perturbation import beating_period, alpha_over_rabi
from polariton_beats.perturbation import cancelling_detuning
from polariton_beats.perturbation import unit_conversion
from polariton_beats.errors import SingularityError, ContractError
from polariton_beats.errors import ManifoldDomainError, ParameterDomainError
from polariton_beats.errors import ValidityWarning
import math
import numpy as np
import pytest


def test_ground_shift_values(reference):
    shift = ground_shift(reference)
    assert shift.de_plus == pytest.approx(1.1550e-3, rel=1e-4)
    assert shift.de_minus == pytest.approx(1.3040e-3, rel=1e-4)
    assert shift.de_zero == 0.0


def test_ground_shift_without_coupling():
    shift = ground_shift(ModelParams(g=0.0, n_tls=4))
    assert shift == (0.0, 0.0, 0.0)


def test_ground_shift_singularity():
    params = ModelParams(g=2.0 / np.sqrt(3.0), n_tls=2)
    with pytest.warns(ValidityWarning):
        with pytest.raises(SingularityError):
            ground_shift(params)


@pytest.mark.parametrize("n_tls", range(2, 16))
def test_fem_sums_match_closed_forms(n_tls):
    params = ModelParams(g=0.07, n_tls=n_tls)
    zero = fem_shift_zero_closed(params)
    pm = fem_shift_pm_closed(params)
    assert fem_shift_sum(params, "zero") == pytest.approx(zero, abs=1e-12)
    assert fem_shift_sum(params, "plus") == pytest.approx(pm, abs=1e-12)
    assert fem_shift_sum(params, "minus") == pytest.approx(pm, abs=1e-12)


def test_fem_shifts_at_two_emitters(reference):
    g2 = reference.g ** 2
    assert fem_shift_sum(reference, "zero") == pytest.approx(-g2 / 2.0)
    assert fem_shift_sum(reference, "plus") == pytest.approx(-g2)


def test_fem_shift_unknown_polariton(reference):
    with pytest.raises(ParameterDomainError):
        fem_shift_sum(reference, "upper")


def test_alpha_prediction_sign():
    alphas = {n: alpha_prediction(ModelParams(g=0.07, n_tls=n))
              for n in range(2, 16)}
    assert alphas[2] == pytest.approx(-1.225e-3, rel=1e-12)
    assert all(alphas[n] < 0 for n in range(2, 5))
    assert alphas[5] == 0.0
    assert all(alphas[n] > 0 for n in range(6, 16))


def test_perturbed_energies(reference):
    energies = perturbed_energies(reference)
    big_omega = rabi_frequency(reference)
    assert energies.e0 == pytest.approx(
        2.0 + energies.de0_ground + energies.de0_fem, abs=1e-15)
    assert energies.e_plus == pytest.approx(
        2.0 + big_omega + energies.de_plus_ground + energies.de_pm_fem,
        abs=1e-15)
    assert energies.alpha_pred == pytest.approx(-1.225e-3, rel=1e-12)
    assert abs(energies.alpha_assembled - energies.alpha_pred) < \
        5.0 * reference.g ** 4
    assert set(energies.to_dict()) >= {"e0", "e_plus", "e_minus",
                                       "alpha_pred"}


def test_perturbed_energies_without_coupling():
    energies = perturbed_energies(ModelParams(g=0.0, n_tls=3))
    assert (energies.e_minus, energies.e0, energies.e_plus) == \
        (2.0, 2.0, 2.0)
    assert energies.alpha_pred == 0.0


def test_perturbation_needs_resonance():
    with pytest.raises(ContractError):
        perturbed_energies(ModelParams(omega_c=1.1, n_tls=2))


def test_perturbation_needs_two_emitters():
    with pytest.raises(ManifoldDomainError):
        alpha_prediction(ModelParams(n_tls=1))


def test_strong_coupling_warns():
    with pytest.warns(ValidityWarning):
        alpha_prediction(ModelParams(g=0.15, n_tls=2))


@pytest.mark.parametrize("n_tls", [2, 3])
@pytest.mark.parametrize("g", [0.03, 0.05, 0.07, 0.09])
def test_prediction_matches_diagonalization(n_tls, g):
    params = ModelParams(g=g, n_tls=n_tls)
    numeric = numeric_triplet(ModelKind.DM, params).alpha
    assert numeric == pytest.approx(alpha_prediction(params), rel=0.3)


def test_alpha_over_rabi_is_linear(reference):
    doubled = reference.replace(g=2 * reference.g)
    assert alpha_over_rabi(doubled) == pytest.approx(
        2.0 * alpha_over_rabi(reference), rel=1e-12)


def test_approximate_count_reduces_to_tc(reference):
    times = np.linspace(0.0, 3000.0, 10000)
    assert np.max(np.abs(dm_photon_count_approx(reference, times, alpha=0.0)
                         - tc_photon_count(reference, times))) < 1e-12
    assert dm_photon_count_approx(reference, 0.0) == \
        pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n_tls", [2, 3, 5, 8])
def test_approximate_count_bounds(n_tls):
    params = ModelParams(g=0.07, n_tls=n_tls)
    values = dm_photon_count_approx(params, np.linspace(0, 6000.0, 60001))
    bound = 8.0 * n_tls * (n_tls - 1) / (2 * n_tls - 1) ** 2
    assert np.min(values) >= -1e-12
    assert np.max(values) <= bound + 1e-12


def test_approximate_count_is_periodic_at_five():
    params = ModelParams(g=0.07, n_tls=5)
    times = np.linspace(0.0, 1000.0, 2001)
    period = 2.0 * np.pi / rabi_frequency(params)
    np.testing.assert_allclose(dm_photon_count_approx(params, times + period),
                               dm_photon_count_approx(params, times),
                               atol=1e-9)


def test_beating_period(reference):
    assert beating_period(reference) == pytest.approx(
        8.0 * math.pi / reference.g ** 2, rel=1e-12)
    assert math.isinf(beating_period(reference.replace(n_tls=5)))
    assert math.isinf(beating_period(reference.replace(g=0.0)))
    periods = {n: beating_period(reference.replace(n_tls=n))
               for n in range(6, 16)}
    assert min(periods, key=periods.get) == 10
    with pytest.raises(ManifoldDomainError):
        beating_period(ModelParams(n_tls=1))


def test_cancelling_detuning(reference):
    assert cancelling_detuning(reference) == pytest.approx(2.45e-3,
                                                           rel=1e-12)


def test_unit_conversion():
    report = unit_conversion(6.0, 450.0, 2)
    assert report.g_over_omega == 0.075
    assert report.t_rabi_ns == pytest.approx(1.28305, rel=1e-4)
    assert report.beat_to_rabi == pytest.approx(4.0 * math.sqrt(3.0) / 0.075,
                                                rel=1e-12)
    assert report.to_dict()["beat_to_rabi"] == report.beat_to_rabi
    assert math.isinf(unit_conversion(6.0, 450.0, 5).t_beat_ns)
    with pytest.raises(ParameterDomainError):
        unit_conversion(-6.0, 450.0, 2)


def test_period_and_units_warn_outside_validated_range(reference):
    with pytest.warns(ValidityWarning):
        beating_period(reference.replace(g=0.2))
    with pytest.warns(ValidityWarning):
        report = unit_conversion(6.0, 900.0, 2)
    assert report.g_over_omega == pytest.approx(0.15)
