"""Closed-form machinery on the second excitation manifold (SEM)

The SEM bright basis is (|s_0, 2>, |s_1, 1>, |s_2, 0>). Energies reported
here follow the ground-shifted convention: the uncoupled ground state
|s_0, 0> sits at zero for TC, and DM / PF levels are measured from each
model's own numerical ground state.
"""

from polariton_beats.basis import flat_index
from polariton_beats.hamiltonians import ModelKind
from polariton_beats.spectral import model_eigensystem, AMBIGUITY_TOLERANCE
from polariton_beats.errors import ContractError, ManifoldDomainError
from polariton_beats.errors import MatchingError
from dataclasses import dataclass
from typing import Tuple
import numpy as np


SEM_STATES = ((0, 2), (1, 1), (2, 0))


@dataclass(frozen=True)
class SemHamiltonian:
    matrix: np.ndarray
    omega_c: float
    omega_m: float
    g: float
    n_tls: int


@dataclass(frozen=True)
class PolaritonTriplet:
    """Upper, middle and lower polaritons of the SEM

    Attributes:

    e_plus, e_zero, e_minus: float
        ground-shifted energies of the three polaritons
    v_plus, v_zero, v_minus: np.ndarray
        unit eigenvectors, 3-vectors on the SEM bright basis for closed
        forms and full-space vectors for numerical triplets
    alpha: float
        the asymmetry (e_plus + e_minus) / 2 - e_zero
    sem_weight: tuple of float
        the weight of each polariton (plus, zero, minus) inside the SEM
    """

    e_plus: float
    e_zero: float
    e_minus: float
    v_plus: np.ndarray
    v_zero: np.ndarray
    v_minus: np.ndarray
    alpha: float
    sem_weight: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    @property
    def energies(self):
        return self.e_minus, self.e_zero, self.e_plus


def asymmetry(e_plus, e_zero, e_minus):
    return 0.5 * (e_plus + e_minus) - e_zero


def require_sem(params):
    if params.n_tls < 2:
        raise ManifoldDomainError(
            f"the SEM bright basis needs |s_2>, got N={params.n_tls}")
    if params.photon_cutoff < 2:
        raise ManifoldDomainError(
            f"the SEM bright basis needs |s_0, 2>, got photon_cutoff="
            f"{params.photon_cutoff}")


def require_resonance(params):
    if not params.is_resonant:
        raise ContractError(
            f"closed forms need omega_c == omega_m, got detuning "
            f"{params.detuning:g}; use numeric_triplet instead")


def rabi(params, m):
    """Omega_M = g sqrt(2 M / N)"""

    return params.g * np.sqrt(2.0 * m / params.n_tls)


def rabi_frequency(params):
    """The effective SEM Rabi frequency Omega = Omega_{2N - 1}"""

    return rabi(params, 2 * params.n_tls - 1)


def sem_indices(params):
    """Flat indices of the SEM bright basis inside the full product space
    """

    require_sem(params)
    return np.array([flat_index(params, k, n) for k, n in SEM_STATES])


def embed_sem_vector(params, vector):
    full = np.zeros(params.dim, dtype=np.complex128)
    full[sem_indices(params)] = vector
    return full


def sem_hamiltonian(params):
    """Build the 3 x 3 TC Hamiltonian of the SEM in the bright basis

    Args:

    params: ModelParams
        the model parameters, N >= 2

    Returns:

    sem: SemHamiltonian
        diagonal (2 omega_c, omega_c + omega_m, 2 omega_m), off-diagonals
        Omega_N and Omega_{N - 1}
    """

    require_sem(params)
    outer, inner = rabi(params, params.n_tls), rabi(params, params.n_tls - 1)
    matrix = np.array([
        [2.0 * params.omega_c, outer, 0.0],
        [outer, params.omega_c + params.omega_m, inner],
        [0.0, inner, 2.0 * params.omega_m]])
    matrix.setflags(write=False)
    return SemHamiltonian(matrix, params.omega_c, params.omega_m,
                          params.g, params.n_tls)


def resonant_triplet(params):
    """The closed-form polaritons at omega_c = omega_m = omega,
    energies 2 omega and 2 omega +- Omega

    Args:

    params: ModelParams
        resonant parameters with N >= 2

    Returns:

    triplet: PolaritonTriplet
        alpha is exactly zero and v_zero has no |s_1, 1> component
    """

    require_sem(params)
    require_resonance(params)
    n = params.n_tls
    omega = params.omega_m
    big_omega = rabi_frequency(params)

    # Omega_N / Omega and Omega_{N-1} / Omega do not depend on g
    outer = np.sqrt(n / (2.0 * n - 1.0))
    inner = np.sqrt((n - 1.0) / (2.0 * n - 1.0))
    v_zero = np.array([inner, 0.0, -outer])
    v_plus = np.array([outer, 1.0, inner]) / np.sqrt(2.0)
    v_minus = np.array([outer, -1.0, inner]) / np.sqrt(2.0)

    return PolaritonTriplet(
        e_plus=2.0 * omega + big_omega, e_zero=2.0 * omega,
        e_minus=2.0 * omega - big_omega,
        v_plus=v_plus, v_zero=v_zero, v_minus=v_minus, alpha=0.0)


def sem_reference_vectors(params):
    """SEM eigenvectors ordered (minus, zero, plus), closed form on
    resonance and from the 3 x 3 matrix otherwise"""

    if params.is_resonant:
        triplet = resonant_triplet(params)
        return np.stack([triplet.v_minus, triplet.v_zero,
                         triplet.v_plus], axis=1)
    _, vectors = np.linalg.eigh(sem_hamiltonian(params).matrix)
    return vectors


def ground_offset(kind, params, eigensystem):
    """The energy that moves a model's reference ground state to zero"""

    if ModelKind.parse(kind) is ModelKind.TC:
        return params.n_tls * params.omega_m / 2.0
    return -float(eigensystem.energies[0])


def numeric_triplet(kind, params):
    """Find the SEM polaritons of a full model by diagonalization

    Each polariton is the eigenstate with the largest overlap with the
    corresponding TC polariton embedded in the full space.

    Args:

    kind: ModelKind or str
        which model to diagonalize
    params: ModelParams
        model parameters with N >= 2

    Returns:

    triplet: PolaritonTriplet
        ground-shifted energies, full-space eigenvectors and alpha
    """

    require_sem(params)
    eigensystem = model_eigensystem(kind, params)
    reference = np.stack([embed_sem_vector(params, column) for column
                          in sem_reference_vectors(params).T], axis=1)
    overlap = np.abs(eigensystem.vectors.conj().T @ reference)

    picks = []
    for column in range(3):
        ordered = np.sort(overlap[:, column])
        if ordered[-1] - ordered[-2] < AMBIGUITY_TOLERANCE:
            raise MatchingError(
                f"{ModelKind.parse(kind)} polariton {column} has two "
                f"candidate eigenstates with equal overlap")
        picks.append(int(np.argmax(overlap[:, column])))
    if len(set(picks)) != 3:
        raise MatchingError("two polaritons matched the same eigenstate")

    shift = ground_offset(kind, params, eigensystem)
    e_minus, e_zero, e_plus = (
        float(eigensystem.energies[i]) + shift for i in picks)
    v_minus, v_zero, v_plus = (
        np.asarray(eigensystem.vectors[:, i]) for i in picks)
    weights = np.sum(np.abs(np.stack([v_plus, v_zero, v_minus])[
        :, sem_indices(params)]) ** 2, axis=1)
    return PolaritonTriplet(
        e_plus=e_plus, e_zero=e_zero, e_minus=e_minus,
        v_plus=v_plus, v_zero=v_zero, v_minus=v_minus,
        alpha=asymmetry(e_plus, e_zero, e_minus),
        sem_weight=tuple(float(w) for w in weights))


def tc_photon_count(params, t):
    """The exact resonant TC photon number for psi(0) = |s_2, 0>,
    -2(N-1)(1 - 4N + cos Omega t) / (2N-1)^2 sin^2(Omega t / 2)

    Args:

    params: ModelParams
        resonant parameters with N >= 2
    t: float or np.ndarray
        the times to evaluate at

    Returns:

    n_mean: float or np.ndarray
        <a^dag a>(t), bounded by 8N(N-1)/(2N-1)^2
    """

    require_sem(params)
    require_resonance(params)
    n = params.n_tls
    phase = rabi_frequency(params) * np.asarray(t, dtype=float)
    return -2.0 * (n - 1) * (1.0 - 4.0 * n + np.cos(phase)) / \
        (2.0 * n - 1) ** 2 * np.sin(phase / 2.0) ** 2


def tc_photon_peak(n_tls):
    """The maximum 8N(N - 1)/(2N - 1)^2 of the resonant TC trace"""

    return 8.0 * n_tls * (n_tls - 1) / (2.0 * n_tls - 1) ** 2
