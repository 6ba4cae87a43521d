from polariton_beats.basis import collective_operator, photon_operator
from polariton_beats.errors import ParameterDomainError
from enum import Enum
import numpy as np


class ModelKind(Enum):
    """The three light-matter models: Tavis-Cummings, Dicke, Pauli-Fierz"""

    TC = "tc"
    DM = "dm"
    PF = "pf"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ParameterDomainError(
                f"unknown model kind {value!r}, expected one of "
                f"{[kind.value for kind in cls]}") from None

    def __str__(self):
        return self.value


def _bare(params):
    return params.omega_m * collective_operator("Jz", params) + \
        params.omega_c * photon_operator("number", params)


def _prefactor(params):
    return params.g / np.sqrt(params.n_tls)


def rotating_term(params):
    """(g / sqrt N)(J+ a + J- a^dag), the excitation-conserving coupling"""

    jplus = collective_operator("Jplus", params)
    jminus = collective_operator("Jminus", params)
    return _prefactor(params) * (
        jplus @ photon_operator("a", params) +
        jminus @ photon_operator("adag", params))


def crw_term(params):
    """The counter-rotating-wave term (g / sqrt N)(J+ a^dag + J- a) that
    couples manifolds whose excitation numbers differ by two

    Args:

    params: ModelParams
        the model whose coupling and emitter count set the prefactor

    Returns:

    h_crw: np.ndarray
        a dense Hermitian matrix, identically zero when g = 0
    """

    jplus = collective_operator("Jplus", params)
    jminus = collective_operator("Jminus", params)
    return _prefactor(params) * (
        jplus @ photon_operator("adag", params) +
        jminus @ photon_operator("a", params))


def dse_term(params):
    """The dipole self-energy (g^2 / (omega_c N)) J_x^2, positive
    semidefinite by construction"""

    jx = collective_operator("Jx", params)
    return params.g ** 2 / (params.omega_c * params.n_tls) * (jx @ jx)


def build_hamiltonian(kind, params):
    """Assemble the Hamiltonian of one of the three models exactly as
    written, so the uncoupled ground state sits at -N omega_m / 2

    Args:

    kind: ModelKind or str
        which of TC, DM or PF to build
    params: ModelParams
        the physical parameters of the model

    Returns:

    hamiltonian: np.ndarray
        a dense Hermitian matrix on the flat |s_k, n> basis
    """

    kind = ModelKind.parse(kind)
    if kind is ModelKind.TC:
        return _bare(params) + rotating_term(params)

    jx = collective_operator("Jx", params)
    field = photon_operator("a", params) + photon_operator("adag", params)
    dicke = _bare(params) + _prefactor(params) * (jx @ field)
    if kind is ModelKind.DM:
        return dicke
    return dicke + dse_term(params)
