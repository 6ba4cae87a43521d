from polariton_beats.errors import ContractError, ValidityWarning
from collections import namedtuple
import warnings
import numpy as np


# the coupling ceiling the perturbative predictions were validated against
VALIDATED_MAX_COUPLING = 0.12


class TimeGrid(namedtuple("TimeGrid", ["t0", "dt", "count"])):
    """A uniform time grid t_i = t0 + i * dt for i in [0, count)"""

    @classmethod
    def span(cls, t_max, dt, t0=0.0):
        """The grid covering [t0, t_max] inclusive at spacing dt"""

        if dt <= 0:
            raise ContractError(f"dt must be positive, got {dt}")
        count = int(np.floor((t_max - t0) / dt + 1e-9)) + 1
        if count < 2:
            raise ContractError(
                f"grid [{t0}, {t_max}] at dt={dt} has fewer than two samples")
        return cls(float(t0), float(dt), count)

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.count)

    @property
    def t_max(self):
        return self.t0 + self.dt * (self.count - 1)


def is_hermitian(matrix, rtol=1e-12):
    """Checks whether a matrix equals its conjugate transpose to within
    rtol relative to its largest entry

    Args:

    matrix: np.ndarray
        a square complex matrix
    rtol: float
        the tolerance relative to the largest magnitude entry

    Returns:

    hermitian: bool
        True when the matrix is square and Hermitian within tolerance
    """

    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    scale = np.max(np.abs(matrix)) if matrix.size else 0.0
    return bool(np.max(np.abs(matrix - matrix.conj().T),
                       initial=0.0) <= rtol * max(scale, 1e-300))


def commutator(a, b):
    return a @ b - b @ a


def expectation(states, operator):
    """<psi|O|psi> for every row psi of a (samples, dim) state array"""

    states = np.atleast_2d(states)
    if states.shape[-1] != operator.shape[0]:
        raise ContractError(
            f"state dimension {states.shape[-1]} does not match "
            f"operator dimension {operator.shape[0]}")
    return np.einsum("ti,ij,tj->t", states.conj(), operator, states)


def sup_norm(a, b):
    """max |a - b| over all entries"""

    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def gershgorin_bound(matrix):
    """An upper bound on the spectral radius of a square matrix"""

    return float(np.max(np.sum(np.abs(matrix), axis=1), initial=0.0))


def check_validated_coupling(g, omega, stacklevel=3):
    """Warn when g / omega leaves the range the predictions were checked in
    """

    if g / omega > VALIDATED_MAX_COUPLING:
        warnings.warn(
            f"g/omega = {g / omega:.4g} exceeds {VALIDATED_MAX_COUPLING}; "
            f"perturbative predictions are outside their validated range",
            ValidityWarning, stacklevel=stacklevel)


def loglog_slope(x, y):
    """Fits y = c * x^p on a log-log scale and returns the exponent p

    Args:

    x: np.ndarray
        positive abscissae such as coupling strengths
    y: np.ndarray
        positive ordinates such as extracted beat frequencies

    Returns:

    p: float
        the least squares slope of log y against log x
    """

    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ContractError("log-log regression needs positive data")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
