from polariton_beats.basis import ModelParams, BasisState, build_basis
from polariton_beats.basis import flat_index, state_at, basis_vector
from polariton_beats.basis import collective_operator, photon_operator
from polariton_beats.basis import excitation_number
from polariton_beats.errors import ParameterDomainError, CutoffPolicyWarning
from polariton_beats.utils import commutator
import numpy as np
import pytest


def test_default_cutoff_is_n_plus_six():
    assert ModelParams(n_tls=3).photon_cutoff == 9


def test_build_basis_order():
    params = ModelParams(n_tls=2, photon_cutoff=4)
    basis = build_basis(params)
    assert len(basis) == 15 == params.dim
    assert basis[0] == BasisState(0, 0)
    assert basis[-1] == BasisState(2, 4)
    assert basis[5] == BasisState(1, 0)


def test_flat_index_round_trip():
    params = ModelParams(n_tls=3, photon_cutoff=5)
    assert flat_index(params, 2, 3) == 15
    for i in range(params.dim):
        assert flat_index(params, *state_at(params, i)) == i


def test_flat_index_out_of_range():
    params = ModelParams(n_tls=2, photon_cutoff=4)
    with pytest.raises(ParameterDomainError):
        flat_index(params, 3, 0)
    with pytest.raises(ParameterDomainError):
        flat_index(params, 0, 5)
    with pytest.raises(ParameterDomainError):
        state_at(params, params.dim)


def test_small_cutoff_warns():
    with pytest.warns(CutoffPolicyWarning):
        ModelParams(n_tls=1, photon_cutoff=0)


@pytest.mark.parametrize("changes", [
    dict(g=-0.1), dict(omega_m=0.0), dict(omega_c=-1.0), dict(n_tls=0),
    dict(n_tls=1.5), dict(photon_cutoff=-1), dict(g=float("nan"))])
def test_invalid_params(changes):
    with pytest.raises(ParameterDomainError):
        ModelParams(**changes)


def test_jz_diagonal():
    params = ModelParams(n_tls=2, photon_cutoff=4)
    jz = collective_operator("Jz", params)
    for k in range(3):
        i = flat_index(params, k, 1)
        assert jz[i, i] == k - 1.0


def test_ladder_elements():
    params = ModelParams(n_tls=2, photon_cutoff=4)
    jplus = collective_operator("Jplus", params)
    assert jplus[flat_index(params, 1, 2), flat_index(params, 0, 2)] == \
        pytest.approx(np.sqrt(2.0))
    top = flat_index(params, 2, 0)
    assert np.all(jplus[:, top] == 0)
    np.testing.assert_array_equal(collective_operator("Jminus", params),
                                  jplus.conj().T)


@pytest.mark.parametrize("n_tls", [1, 2, 5])
def test_spin_algebra(n_tls):
    params = ModelParams(n_tls=n_tls)
    jplus = collective_operator("Jplus", params)
    jminus = collective_operator("Jminus", params)
    jz = collective_operator("Jz", params)
    np.testing.assert_allclose(commutator(jplus, jminus), 2.0 * jz,
                               atol=1e-12)
    np.testing.assert_allclose(collective_operator("Jx", params),
                               jplus + jminus, atol=0)


def test_photon_operators():
    params = ModelParams(n_tls=1, photon_cutoff=4)
    a = photon_operator("a", params)
    adag = photon_operator("adag", params)
    number = photon_operator("number", params)
    assert a[flat_index(params, 0, 2), flat_index(params, 0, 3)] == \
        pytest.approx(np.sqrt(3.0))
    np.testing.assert_allclose(adag @ a, number, atol=1e-12)

    # [a, a^dag] = 1 away from the truncation edge
    bracket = np.diag(commutator(a, adag)).real
    below = [flat_index(params, k, n) for k in range(2) for n in range(4)]
    np.testing.assert_allclose(bracket[below], 1.0)
    assert bracket[flat_index(params, 0, 4)] == pytest.approx(-4.0)


def test_operators_are_read_only():
    params = ModelParams(n_tls=2)
    with pytest.raises(ValueError):
        collective_operator("Jz", params)[0, 0] = 1.0
    with pytest.raises(ValueError):
        photon_operator("a", params)[0, 1] = 1.0


def test_unknown_operator():
    params = ModelParams(n_tls=2)
    with pytest.raises(ParameterDomainError):
        collective_operator("Jy", params)
    with pytest.raises(ParameterDomainError):
        photon_operator("x", params)


def test_basis_vector_and_excitations():
    params = ModelParams(n_tls=2)
    psi = basis_vector(params, 1, 3)
    assert np.linalg.norm(psi) == 1.0
    value = (psi.conj() @ excitation_number(params) @ psi).real
    assert value == pytest.approx(0.0 + 3.0)
