from polariton_beats.errors import ParameterDomainError
from polariton_beats.errors import CutoffPolicyWarning
from collections import namedtuple
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional
import warnings
import math
import numpy as np


COLLECTIVE_OPERATORS = ("Jz", "Jplus", "Jminus", "Jx")
PHOTON_OPERATORS = ("a", "adag", "number")


# |s_k, n>: k excited emitters in the symmetric ladder, n cavity photons
BasisState = namedtuple("BasisState", ["k_excitations", "n_photons"])


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters that define one instance of a cavity model
    in units of a reference frequency

    Attributes:

    omega_m: float
        the transition frequency of every two-level emitter
    omega_c: float
        the frequency of the single cavity mode
    g: float
        the collective light-matter coupling strength
    n_tls: int
        the number N of two-level emitters
    photon_cutoff: int
        the largest Fock number n_max kept in the truncated cavity space,
        defaults to N + 6 when left as None
    """

    omega_m: float = 1.0
    omega_c: float = 1.0
    g: float = 0.07
    n_tls: int = 2
    photon_cutoff: Optional[int] = None

    def __post_init__(self):

        for name in ("omega_m", "omega_c", "g"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) \
                    or not math.isfinite(value):
                raise ParameterDomainError(
                    f"{name} must be a finite real number, got {value!r}")

        if self.omega_m <= 0:
            raise ParameterDomainError(
                f"omega_m must be positive, got {self.omega_m}")
        if self.omega_c <= 0:
            raise ParameterDomainError(
                f"omega_c must be positive, got {self.omega_c}")
        if self.g < 0:
            raise ParameterDomainError(
                f"g must be non-negative, got {self.g}")
        if isinstance(self.n_tls, bool) or \
                int(self.n_tls) != self.n_tls or self.n_tls < 1:
            raise ParameterDomainError(
                f"n_tls must be an integer >= 1, got {self.n_tls!r}")
        object.__setattr__(self, "n_tls", int(self.n_tls))

        if self.photon_cutoff is None:
            object.__setattr__(self, "photon_cutoff", self.n_tls + 6)
        if isinstance(self.photon_cutoff, bool) or \
                int(self.photon_cutoff) != self.photon_cutoff or \
                self.photon_cutoff < 0:
            raise ParameterDomainError(
                f"photon_cutoff must be an integer >= 0, "
                f"got {self.photon_cutoff!r}")
        object.__setattr__(self, "photon_cutoff", int(self.photon_cutoff))

        if self.photon_cutoff < self.n_tls + 2:
            warnings.warn(
                f"photon_cutoff={self.photon_cutoff} is below the N + 2 "
                f"policy for N={self.n_tls}; check convergence",
                CutoffPolicyWarning, stacklevel=3)

    @property
    def detuning(self):
        return self.omega_c - self.omega_m

    @property
    def is_resonant(self):
        return math.isclose(self.omega_c, self.omega_m,
                            rel_tol=0.0, abs_tol=1e-12)

    @property
    def spin_dim(self):
        return self.n_tls + 1

    @property
    def fock_dim(self):
        return self.photon_cutoff + 1

    @property
    def dim(self):
        return self.spin_dim * self.fock_dim

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return dict(omega_m=self.omega_m, omega_c=self.omega_c, g=self.g,
                    n_tls=self.n_tls, photon_cutoff=self.photon_cutoff)


def flat_index(params, k_excitations, n_photons):
    """Position of |s_k, n> in the flat product basis, k * (n_max + 1) + n
    """

    if not 0 <= k_excitations <= params.n_tls:
        raise ParameterDomainError(
            f"k_excitations={k_excitations} outside [0, {params.n_tls}]")
    if not 0 <= n_photons <= params.photon_cutoff:
        raise ParameterDomainError(
            f"n_photons={n_photons} outside [0, {params.photon_cutoff}]")
    return k_excitations * params.fock_dim + n_photons


def state_at(params, index):
    """Inverse of flat_index"""

    if not 0 <= index < params.dim:
        raise ParameterDomainError(
            f"index {index} outside [0, {params.dim})")
    return BasisState(*divmod(int(index), params.fock_dim))


def build_basis(params):
    """Enumerate the symmetric-spin times truncated-Fock product basis
    in flat-index order

    Args:

    params: ModelParams
        the model whose basis is enumerated

    Returns:

    basis: list of BasisState
        (N + 1) * (n_max + 1) states, the i-th entry sits at flat index i
    """

    return [BasisState(k, n) for k in range(params.spin_dim)
            for n in range(params.fock_dim)]


def basis_vector(params, k_excitations, n_photons):
    """The normalized product state |s_k, n> as a complex vector"""

    psi = np.zeros(params.dim, dtype=np.complex128)
    psi[flat_index(params, k_excitations, n_photons)] = 1.0
    return psi


def _freeze(matrix):
    matrix.setflags(write=False)
    return matrix


def spin_ladder(n_tls):
    """The (N + 1) x (N + 1) raising operator of the j = N / 2 ladder,
    indexed by excitation level k = m + N / 2
    """

    k = np.arange(n_tls)
    jplus = np.zeros((n_tls + 1, n_tls + 1), dtype=np.complex128)
    jplus[k + 1, k] = np.sqrt((n_tls - k) * (k + 1.0))
    return jplus


def fock_annihilation(photon_cutoff):
    """The (n_max + 1) x (n_max + 1) truncated annihilation operator"""

    n = np.arange(1, photon_cutoff + 1)
    a = np.zeros((photon_cutoff + 1, photon_cutoff + 1), dtype=np.complex128)
    a[n - 1, n] = np.sqrt(n)
    return a


@lru_cache(maxsize=256)
def collective_operator(name, params):
    """Build a collective spin operator on the full product space

    Args:

    name: str
        one of Jz, Jplus, Jminus or Jx where Jx = Jplus + Jminus
        without a factor of one half
    params: ModelParams
        the model that fixes N and the photon cutoff

    Returns:

    operator: np.ndarray
        a read-only dense complex matrix tensored with the Fock identity
    """

    if name not in COLLECTIVE_OPERATORS:
        raise ParameterDomainError(
            f"unknown collective operator {name!r}, "
            f"expected one of {COLLECTIVE_OPERATORS}")

    jplus = spin_ladder(params.n_tls)
    spin = {
        "Jz": np.diag(np.arange(params.spin_dim) - params.n_tls / 2.0)
        .astype(np.complex128),
        "Jplus": jplus,
        "Jminus": jplus.conj().T,
        "Jx": jplus + jplus.conj().T}[name]
    return _freeze(np.kron(spin, np.eye(params.fock_dim)))


@lru_cache(maxsize=256)
def photon_operator(name, params):
    """Build a cavity operator on the full product space

    Args:

    name: str
        one of a, adag or number; adag annihilates the top Fock state
    params: ModelParams
        the model that fixes N and the photon cutoff

    Returns:

    operator: np.ndarray
        a read-only dense complex matrix tensored with the spin identity
    """

    if name not in PHOTON_OPERATORS:
        raise ParameterDomainError(
            f"unknown photon operator {name!r}, "
            f"expected one of {PHOTON_OPERATORS}")

    a = fock_annihilation(params.photon_cutoff)
    fock = {
        "a": a,
        "adag": a.conj().T,
        "number": np.diag(np.arange(params.fock_dim))
        .astype(np.complex128)}[name]
    return _freeze(np.kron(np.eye(params.spin_dim), fock))


def excitation_number(params):
    """J_z + a^dag a, the quantity conserved by the Tavis-Cummings model"""

    return collective_operator("Jz", params) + \
        photon_operator("number", params)
