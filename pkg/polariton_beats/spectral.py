from polariton_beats.basis import photon_operator, excitation_number
from polariton_beats.hamiltonians import ModelKind, build_hamiltonian
from polariton_beats.errors import ContractError, StepSizeError
from polariton_beats.errors import MatchingError
from polariton_beats.errors import ConvergenceWarning, NormalizationWarning
from polariton_beats.utils import TimeGrid, is_hermitian, expectation
from polariton_beats.utils import gershgorin_bound, sup_norm
from collections import namedtuple
from dataclasses import dataclass, field
import warnings
import scipy.linalg
import numpy as np


NORM_TOLERANCE = 1e-10
ODE_NORM_DRIFT = 1e-8
CONVERGENCE_TOLERANCE = 1e-8
AMBIGUITY_TOLERANCE = 1e-6


class EigenSystem(namedtuple("EigenSystem", ["energies", "vectors"])):
    """Ascending eigenvalues with orthonormal eigenvectors stored as
    the columns of vectors"""

    def residual(self, hamiltonian):
        """max over pairs of ||H v - E v|| relative to ||H||_2"""

        scale = max(np.linalg.norm(hamiltonian, 2), 1e-300)
        r = hamiltonian @ self.vectors - self.vectors * self.energies
        return float(np.max(np.linalg.norm(r, axis=0), initial=0.0) / scale)

    def reconstruct(self):
        return (self.vectors * self.energies) @ self.vectors.conj().T


@dataclass(frozen=True)
class ObservableTrace:
    """A real observable sampled on a uniform time grid

    Attributes:

    grid: TimeGrid
        the (t0, dt, count) grid the values were sampled on
    values: np.ndarray
        count real samples
    label: str
        what was measured, for example n_mean
    metadata: dict
        diagnostics produced alongside the samples
    """

    grid: TimeGrid
    values: np.ndarray
    label: str = "observable"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.count,):
            raise ContractError(
                f"{values.shape[0] if values.ndim else 0} samples do not "
                f"match a grid of {self.grid.count}")
        if not np.all(np.isfinite(values)):
            raise ContractError(f"trace {self.label} has non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def times(self):
        return self.grid.times


class HybridSpec(namedtuple("HybridSpec", [
        "coefficient_source", "eigenvector_source", "eigenvalue_source"])):
    """Which model supplies each ingredient of a mixed spectral
    reconstruction"""

    def __new__(cls, coefficient_source, eigenvector_source,
                eigenvalue_source):
        return super().__new__(cls, ModelKind.parse(coefficient_source),
                               ModelKind.parse(eigenvector_source),
                               ModelKind.parse(eigenvalue_source))


ConvergenceReport = namedtuple("ConvergenceReport", [
    "cutoff", "doubled_cutoff", "sup_norm_difference", "tolerance", "passed"])


def diagonalize(hamiltonian):
    """Diagonalize a dense Hermitian matrix

    Args:

    hamiltonian: np.ndarray
        a square matrix that must be Hermitian to within 1e-12

    Returns:

    eigensystem: EigenSystem
        ascending energies and the matching orthonormal eigenvectors
    """

    if not is_hermitian(hamiltonian):
        raise ContractError("diagonalize requires a Hermitian matrix")
    energies, vectors = scipy.linalg.eigh(hamiltonian)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(energies, vectors)


def _check_state(psi0, dim):
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (dim,):
        raise ContractError(
            f"state of shape {psi0.shape} does not match dimension {dim}")
    if abs(np.linalg.norm(psi0) - 1.0) > NORM_TOLERANCE:
        raise ContractError("initial state must be normalized")
    return psi0


def _evolve(coefficients, energies, vectors, times):
    phases = np.exp(-1j * np.outer(times, energies))
    return (phases * coefficients) @ vectors.T


def propagate_spectral(eigensystem, psi0, grid):
    """Propagate a state by spectral decomposition,
    psi(t) = sum_l c_l exp(-i E_l t) P_l with c_l = <P_l|psi(0)>

    Args:

    eigensystem: EigenSystem
        the eigenpairs of a time-independent Hamiltonian
    psi0: np.ndarray
        the normalized state at t = 0
    grid: TimeGrid
        the sampling times

    Returns:

    states: np.ndarray
        a (count, dim) complex array whose rows are psi(t_i)
    """

    vectors = eigensystem.vectors
    psi0 = _check_state(psi0, vectors.shape[0])
    return _evolve(vectors.conj().T @ psi0,
                   eigensystem.energies, vectors, grid.times)


def rk4_step(psi, rhs, dt):
    """One classical Runge-Kutta step for d psi / dt = rhs(psi)"""

    k1 = rhs(psi)
    k2 = rhs(psi + 0.5 * dt * k1)
    k3 = rhs(psi + 0.5 * dt * k2)
    k4 = rhs(psi + dt * k3)
    return psi + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def default_ode_step(hamiltonian, grid, dt_max=None):
    """The integration step: at most dt (or dt_max), at least 40 steps per
    fastest phase rotation of the centred operator, and small enough that
    the worst-case RK4 amplitude loss over the run stays below 1e-9"""

    bound = gershgorin_bound(hamiltonian)
    step = grid.dt if dt_max is None else min(dt_max, grid.dt)
    if bound > 0:
        duration = max(grid.t_max, grid.dt)
        step = min(step, 2.0 * np.pi / (40.0 * bound),
                   (72.0 * 1e-9 / (duration * bound ** 6)) ** 0.2)
    return step


def _rk4_propagator(generator, interval, step):
    """The RK4 map over one interval split into equal substeps no longer
    than step; RK4 is linear here, so the substeps compose into one matrix
    """

    substeps = max(int(np.ceil(interval / step - 1e-12)), 1)
    eye = np.eye(generator.shape[0], dtype=np.complex128)
    one_step = rk4_step(eye, lambda x: generator @ x, interval / substeps)
    return np.linalg.matrix_power(one_step, substeps), substeps


def propagate_ode(hamiltonian, psi0, grid, dt_max=None):
    """Integrate i d psi / dt = H psi with fixed-step fourth order
    Runge-Kutta and sample the solution on a grid

    The operator is centred on <psi0|H|psi0> before integration and the
    global phase is restored analytically afterwards.

    Args:

    hamiltonian: np.ndarray
        a dense Hermitian matrix
    psi0: np.ndarray
        the normalized state at t = 0
    grid: TimeGrid
        the sampling times, t0 >= 0
    dt_max: float
        an optional upper limit on the integration step

    Returns:

    states: np.ndarray
        a (count, dim) complex array whose rows are psi(t_i)
    """

    if dt_max is not None and dt_max <= 0:
        raise ContractError(f"dt_max must be positive, got {dt_max}")
    if grid.t0 < 0:
        raise ContractError("propagate_ode starts at t = 0 and needs t0 >= 0")
    psi0 = _check_state(psi0, hamiltonian.shape[0])

    centre = float(np.real(psi0.conj() @ hamiltonian @ psi0))
    centred = hamiltonian - centre * np.eye(hamiltonian.shape[0])
    generator = -1j * centred
    step = default_ode_step(centred, grid, dt_max=dt_max)

    psi = psi0.copy()
    if grid.t0 > 0:
        lead, _ = _rk4_propagator(generator, grid.t0, step)
        psi = lead @ psi
    interval, substeps = _rk4_propagator(generator, grid.dt, step)

    states = np.empty((grid.count, psi.size), dtype=np.complex128)
    for i in range(grid.count):
        states[i] = psi
        psi = interval @ psi
    states *= np.exp(-1j * centre * grid.times)[:, np.newaxis]

    drift = float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0)))
    if drift > ODE_NORM_DRIFT:
        raise StepSizeError(
            f"RK4 norm drift {drift:.3e} exceeds {ODE_NORM_DRIFT:.0e} with "
            f"{substeps} substeps per sample; pass a smaller dt_max "
            f"than {grid.dt / substeps:.3e}")
    return states


def observable_trace(states, operator, grid, label="observable"):
    """Evaluate <psi(t_i)|O|psi(t_i)> on every sample of a propagation

    Args:

    states: np.ndarray
        a (count, dim) array of states
    operator: np.ndarray
        a Hermitian matrix of the same dimension
    grid: TimeGrid
        the grid the states were sampled on
    label: str
        the name attached to the returned trace

    Returns:

    trace: ObservableTrace
        the real expectation values
    """

    values = expectation(states, operator)
    imaginary = float(np.max(np.abs(values.imag), initial=0.0))
    if imaginary > 1e-10 * max(1.0, float(np.max(np.abs(values.real)))):
        raise ContractError(
            f"expectation values of {label} are not real "
            f"(imaginary part {imaginary:.3e})")
    return ObservableTrace(grid, values.real, label,
                           dict(max_imaginary=imaginary))


def photon_statistics(states, params, grid):
    """The mean and variance of the cavity photon number along a run

    Returns:

    n_mean: ObservableTrace
        <a^dag a>(t)
    n_var: ObservableTrace
        <(a^dag a)^2>(t) - <a^dag a>(t)^2
    """

    number = photon_operator("number", params)
    n_mean = observable_trace(states, number, grid, "n_mean")
    n_square = observable_trace(states, number @ number, grid, "n_square")
    return n_mean, ObservableTrace(
        grid, np.maximum(n_square.values - n_mean.values ** 2, 0.0), "n_var")


def excitation_drift(states, params):
    """max_t |<J_z + a^dag a>(t) - <J_z + a^dag a>(0)|"""

    values = expectation(states, excitation_number(params)).real
    return float(np.max(np.abs(values - values[0])))


def model_eigensystem(kind, params):
    return diagonalize(build_hamiltonian(kind, params))


def photon_trace(kind, params, psi0, grid):
    """<a^dag a>(t) of one model propagated by spectral decomposition"""

    states = propagate_spectral(model_eigensystem(kind, params), psi0, grid)
    return observable_trace(
        states, photon_operator("number", params), grid, "n_mean")


def match_eigenvectors(reference, other, tolerance=AMBIGUITY_TOLERANCE):
    """Pair the eigenvectors of two models by maximum overlap

    Args:

    reference: np.ndarray
        eigenvectors of the reference model as columns
    other: np.ndarray
        eigenvectors of the second model as columns
    tolerance: float
        two overlaps in one row closer than this are ambiguous

    Returns:

    permutation: np.ndarray
        other[:, permutation[l]] is the partner of reference[:, l]
    aligned: np.ndarray
        the partners with phases chosen so <reference_l|aligned_l> > 0
    """

    if reference.shape != other.shape:
        raise ContractError("eigenvector sets have different shapes")
    overlap = reference.conj().T @ other
    magnitude = np.abs(overlap)

    ordered = np.sort(magnitude, axis=1)
    if ordered.shape[1] > 1:
        gaps = ordered[:, -1] - ordered[:, -2]
        ambiguous = np.flatnonzero(gaps < tolerance)
        if ambiguous.size:
            raise MatchingError(
                f"eigenvector {int(ambiguous[0])} has two partners within "
                f"{tolerance:g} of each other")

    # greedy assignment on the overlap matrix
    dim = reference.shape[1]
    permutation = -np.ones(dim, dtype=int)
    taken = np.zeros(dim, dtype=bool)
    for flat in np.argsort(-magnitude, axis=None, kind="stable"):
        row, col = divmod(int(flat), dim)
        if permutation[row] < 0 and not taken[col]:
            permutation[row] = col
            taken[col] = True

    partner = overlap[np.arange(dim), permutation]
    phases = np.where(np.abs(partner) > 0,
                      np.conj(partner) / np.maximum(np.abs(partner), 1e-300),
                      1.0)
    return permutation, other[:, permutation] * phases


def hybrid_propagate(sources, params, psi0, grid):
    """Mixed spectral reconstruction that takes projection coefficients,
    eigenvectors and eigenvalues from possibly different models

    The eigenpairs are indexed by the eigenvector source; the other models
    are paired to it by maximum overlap. Each sample is renormalized before
    the photon number is evaluated and the largest norm deviation is kept
    in the trace metadata.

    Args:

    sources: HybridSpec
        the model supplying each ingredient
    params: ModelParams
        the shared physical parameters
    psi0: np.ndarray
        the normalized initial state
    grid: TimeGrid
        the sampling times

    Returns:

    trace: ObservableTrace
        <a^dag a>(t) of the reconstructed state
    """

    psi0 = _check_state(psi0, params.dim)
    kinds = {sources.coefficient_source, sources.eigenvector_source,
             sources.eigenvalue_source}
    systems = {kind: model_eigensystem(kind, params) for kind in kinds}

    reference = systems[sources.eigenvector_source]
    paired = {sources.eigenvector_source: (
        np.arange(params.dim), np.asarray(reference.vectors))}
    for kind in kinds - {sources.eigenvector_source}:
        paired[kind] = match_eigenvectors(
            reference.vectors, systems[kind].vectors)

    coefficients = paired[sources.coefficient_source][1].conj().T @ psi0
    energies = systems[sources.eigenvalue_source].energies[
        paired[sources.eigenvalue_source][0]]
    states = _evolve(coefficients, energies, reference.vectors, grid.times)

    norms = np.linalg.norm(states, axis=1)
    deviation = float(np.max(np.abs(norms - 1.0)))
    if deviation > ODE_NORM_DRIFT:
        warnings.warn(
            f"hybrid reconstruction {tuple(map(str, sources))} deviates from "
            f"unit norm by {deviation:.3e}; samples were renormalized",
            NormalizationWarning, stacklevel=2)
    states = states / norms[:, np.newaxis]

    trace = observable_trace(
        states, photon_operator("number", params), grid, "n_mean")
    trace.metadata.update(
        hybrid=dict(coefficients=str(sources.coefficient_source),
                    eigenvectors=str(sources.eigenvector_source),
                    eigenvalues=str(sources.eigenvalue_source)),
        renormalized=True, max_norm_deviation=deviation)
    return trace


def embed_state(psi, params, target):
    """Copy a state onto the basis of a model with a larger photon cutoff
    """

    if target.n_tls != params.n_tls or \
            target.photon_cutoff < params.photon_cutoff:
        raise ContractError("target basis must contain the source basis")
    embedded = np.zeros((target.spin_dim, target.fock_dim),
                        dtype=np.complex128)
    embedded[:, :params.fock_dim] = np.reshape(
        psi, (params.spin_dim, params.fock_dim))
    return embedded.reshape(-1)


def convergence_check(kind, params, psi0, grid):
    """Rerun the photon trace with the photon cutoff doubled

    Args:

    kind: ModelKind or str
        the model to check
    params: ModelParams
        the parameters whose cutoff is under test
    psi0: np.ndarray
        the initial state on the basis of params
    grid: TimeGrid
        the sampling times

    Returns:

    report: ConvergenceReport
        passes when the sup-norm change of <a^dag a>(t) is below 1e-8
    """

    doubled = params.replace(photon_cutoff=max(2 * params.photon_cutoff, 1))
    base = photon_trace(kind, params, psi0, grid)
    refined = photon_trace(
        kind, doubled, embed_state(psi0, params, doubled), grid)
    difference = sup_norm(base.values, refined.values)
    report = ConvergenceReport(
        params.photon_cutoff, doubled.photon_cutoff, difference,
        CONVERGENCE_TOLERANCE, difference < CONVERGENCE_TOLERANCE)
    if not report.passed:
        warnings.warn(
            f"{ModelKind.parse(kind)} photon trace changed by "
            f"{difference:.3e} when the cutoff was doubled from "
            f"{params.photon_cutoff}", ConvergenceWarning, stacklevel=2)
    return report
