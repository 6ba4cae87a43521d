"""Second-order counter-rotating-wave corrections to the SEM polaritons

All formulas hold at resonance, omega_c = omega_m = omega, and follow the
ground-shifted energy convention of polariton_beats.sem.
"""

from polariton_beats.basis import spin_ladder, fock_annihilation
from polariton_beats.sem import require_sem, require_resonance
from polariton_beats.sem import rabi_frequency, resonant_triplet, SEM_STATES
from polariton_beats.errors import ManifoldDomainError, SingularityError
from polariton_beats.errors import ParameterDomainError
from polariton_beats.utils import check_validated_coupling
from collections import namedtuple
from dataclasses import dataclass, asdict
import math
import numpy as np


POLARITONS = ("plus", "zero", "minus")


# energy gap between the SEM and the FEM used in every FEM denominator
FEM_DENOMINATOR = -2.0


GroundShift = namedtuple("GroundShift", ["de_plus", "de_minus", "de_zero"])


@dataclass(frozen=True)
class PerturbedEnergies:
    """Second-order corrections to the resonant polariton triplet

    Attributes:

    de0_ground, de_plus_ground, de_minus_ground: float
        shifts from the CRW coupling to the global ground state
    de0_fem, de_pm_fem: float
        shifts from the CRW coupling to the fourth excitation manifold
    e0, e_plus, e_minus: float
        the unperturbed energies plus the listed shifts
    alpha_pred: float
        the beating frequency under the equal ground shift approximation
    de_ground_symmetric: float
        the shared ground shift g^2 omega / (4 omega^2 - Omega^2)
    alpha_assembled: float
        (e_plus + e_minus) / 2 - e0 from the totals, no approximation
    """

    de0_ground: float
    de_plus_ground: float
    de_minus_ground: float
    de0_fem: float
    de_pm_fem: float
    e0: float
    e_plus: float
    e_minus: float
    alpha_pred: float
    de_ground_symmetric: float
    alpha_assembled: float

    def to_dict(self):
        return asdict(self)


def _omega(params):
    require_sem(params)
    require_resonance(params)
    check_validated_coupling(params.g, params.omega_m, stacklevel=4)
    return params.omega_m


def ground_shift(params):
    """Second-order shifts of the outer polaritons through their CRW
    coupling g / sqrt(2) to the global ground state |s_0, 0>

    Args:

    params: ModelParams
        resonant parameters with N >= 2

    Returns:

    shift: GroundShift
        g^2 / (2 (2 omega +- Omega)) for the outer pair and zero for the
        middle polariton, which has no |s_1, 1> component
    """

    omega = _omega(params)
    big_omega = rabi_frequency(params)
    if math.isclose(2.0 * omega, big_omega, rel_tol=1e-12, abs_tol=1e-15):
        raise SingularityError(
            f"2 omega = Omega = {big_omega:g}: the ground state is degenerate "
            f"with the lower polariton (deep strong coupling)")
    g2 = params.g ** 2
    return GroundShift(de_plus=g2 / (2.0 * (2.0 * omega + big_omega)),
                       de_minus=g2 / (2.0 * (2.0 * omega - big_omega)),
                       de_zero=0.0)


def fem_coupling(params):
    """<s_k+1, n+1|(g / sqrt N) J+ a^dag|s_k, n> for each SEM bright state,
    zero where |s_k+1> leaves the ladder"""

    n = params.n_tls
    jplus = spin_ladder(n)
    creation = fock_annihilation(3).T
    elements = []
    for k, photons in SEM_STATES:
        spin = jplus[k + 1, k].real if k + 1 <= n else 0.0
        elements.append(params.g / np.sqrt(n) * spin *
                        creation[photons + 1, photons].real)
    return np.array(elements)


def _polariton_vector(params, which):
    if which not in POLARITONS:
        raise ParameterDomainError(
            f"unknown polariton {which!r}, expected one of {POLARITONS}")
    return getattr(resonant_triplet(params), "v_" + which)


def fem_shift_sum(params, which):
    """Sum the second-order coupling of one resonant polariton to the
    fourth excitation manifold over its explicit matrix elements

    Each SEM state |s_k, n> couples to exactly one FEM state
    |s_k+1, n+1>, and all FEM denominators are taken as E_i - 4 omega
    with E_i replaced by 2 omega.

    Args:

    params: ModelParams
        resonant parameters with N >= 2
    which: str
        one of plus, zero or minus

    Returns:

    shift: float
        the second-order energy shift Delta E_i^(4)
    """

    omega = _omega(params)
    vector = _polariton_vector(params, which)
    numerator = np.sum(np.abs(vector * fem_coupling(params)) ** 2)
    return float(numerator / (FEM_DENOMINATOR * omega))


def fem_shift_zero_closed(params):
    """3 g^2 (3 - 2N) / (2 omega (2N - 1))"""

    n, omega = params.n_tls, _omega(params)
    return 3.0 * params.g ** 2 * (3.0 - 2.0 * n) / (2.0 * omega * (2 * n - 1))


def fem_shift_pm_closed(params):
    """g^2 (10 + 7N(2N - 3)) / (2N(2N - 1)(-2 omega))"""

    n, omega = params.n_tls, _omega(params)
    return params.g ** 2 * (10.0 + 7.0 * n * (2 * n - 3)) / \
        (2.0 * n * (2 * n - 1) * (-2.0 * omega))


def alpha_prediction(params):
    """(g^2 / 2 omega)(N - 5) / (N (2N - 1)), negative below N = 5,
    zero at N = 5 and positive above"""

    n, omega = params.n_tls, _omega(params)
    return params.g ** 2 / (2.0 * omega) * (n - 5.0) / (n * (2 * n - 1))


def perturbed_energies(params):
    """Assemble the perturbed polariton energies of the Dicke model

    Args:

    params: ModelParams
        resonant parameters with N >= 2

    Returns:

    energies: PerturbedEnergies
        totals, the individual shifts and the predicted beat frequency
    """

    omega = _omega(params)
    big_omega = rabi_frequency(params)
    ground = ground_shift(params)
    de0_fem = fem_shift_sum(params, "zero")
    de_pm_fem = fem_shift_sum(params, "plus")

    e0 = 2.0 * omega + ground.de_zero + de0_fem
    e_plus = 2.0 * omega + big_omega + ground.de_plus + de_pm_fem
    e_minus = 2.0 * omega - big_omega + ground.de_minus + de_pm_fem
    return PerturbedEnergies(
        de0_ground=ground.de_zero, de_plus_ground=ground.de_plus,
        de_minus_ground=ground.de_minus, de0_fem=de0_fem,
        de_pm_fem=de_pm_fem, e0=e0, e_plus=e_plus, e_minus=e_minus,
        alpha_pred=alpha_prediction(params),
        de_ground_symmetric=params.g ** 2 * omega / (
            4.0 * omega ** 2 - big_omega ** 2),
        alpha_assembled=0.5 * (e_plus + e_minus) - e0)


def dm_photon_count_approx(params, t, alpha=None):
    """The approximate Dicke photon number for psi(0) = |s_2, 0>,
    (N-1) / (2 (2N-1)^2) [cos 2 Omega t + 8N - 1 - 8N cos(alpha t) cos(Omega t)]

    Args:

    params: ModelParams
        resonant parameters with N >= 2
    t: float or np.ndarray
        the times to evaluate at
    alpha: float
        the beat frequency, alpha_prediction(params) when None; alpha = 0
        reduces the formula to the exact TC photon count

    Returns:

    n_mean: float or np.ndarray
        <a^dag a>(t)
    """

    _omega(params)
    n = params.n_tls
    alpha = alpha_prediction(params) if alpha is None else alpha
    big_omega = rabi_frequency(params)
    t = np.asarray(t, dtype=float)
    return (n - 1.0) / (2.0 * (2 * n - 1) ** 2) * (
        np.cos(2.0 * big_omega * t) + 8.0 * n - 1.0 -
        8.0 * n * np.cos(alpha * t) * np.cos(big_omega * t))


def beating_period(params):
    """T_beat = (4 pi omega / g^2) |N (2N - 1) / (N - 5)|

    Returns:

    period: float
        math.inf at N = 5, where the beating vanishes, and when g = 0
    """

    if params.n_tls < 2:
        raise ManifoldDomainError(
            f"the beating period needs N >= 2, got N={params.n_tls}")
    check_validated_coupling(params.g, params.omega_c)
    n = params.n_tls
    if n == 5 or params.g == 0:
        return math.inf
    return 4.0 * math.pi * params.omega_c / params.g ** 2 * \
        abs(n * (2 * n - 1) / (n - 5.0))


def alpha_over_rabi(params):
    """alpha_pred / Omega, linear in g"""

    return alpha_prediction(params) / rabi_frequency(params)


def detuning_asymmetry_slope(n_tls):
    """d alpha / d(omega_c - omega_m) of the TC triplet near resonance"""

    return 3.0 / (2.0 * (2 * n_tls - 1))


def cancelling_detuning(params):
    """The detuning omega_c - omega_m whose first-order TC asymmetry
    cancels the CRW asymmetry alpha_pred"""

    return -alpha_prediction(params) / detuning_asymmetry_slope(params.n_tls)


@dataclass(frozen=True)
class UnitReport:
    omega_c_ghz: float
    g_mhz: float
    n_tls: int
    g_over_omega: float
    t_rabi_ns: float
    t_beat_ns: float
    definitions: dict

    @property
    def beat_to_rabi(self):
        return self.t_beat_ns / self.t_rabi_ns

    def to_dict(self):
        report = asdict(self)
        report["beat_to_rabi"] = self.beat_to_rabi
        return report


def unit_conversion(omega_c_ghz, g_mhz, n_tls):
    """Convert the dimensionless predictions to laboratory units

    Args:

    omega_c_ghz: float
        the cavity frequency omega_c / 2 pi in GHz
    g_mhz: float
        the coupling g / 2 pi in MHz
    n_tls: int
        the number of emitters, N >= 2

    Returns:

    report: UnitReport
        the coupling ratio and the Rabi and beat periods in ns with the
        definitions used to compute them
    """

    if omega_c_ghz <= 0 or g_mhz <= 0:
        raise ParameterDomainError(
            "unit conversion needs positive frequencies, got "
            f"omega_c_ghz={omega_c_ghz}, g_mhz={g_mhz}")
    if n_tls < 2:
        raise ManifoldDomainError(
            f"unit conversion needs N >= 2, got N={n_tls}")

    ratio = g_mhz / (1000.0 * omega_c_ghz)
    check_validated_coupling(ratio, 1.0)
    angular = 2.0 * math.pi * omega_c_ghz  # rad / ns
    rabi = ratio * math.sqrt(2.0 * (2 * n_tls - 1) / n_tls)
    t_beat = math.inf if n_tls == 5 else \
        4.0 * math.pi / ratio ** 2 * abs(
            n_tls * (2 * n_tls - 1) / (n_tls - 5.0))

    return UnitReport(
        omega_c_ghz=float(omega_c_ghz), g_mhz=float(g_mhz), n_tls=int(n_tls),
        g_over_omega=ratio, t_rabi_ns=2.0 * math.pi / (rabi * angular),
        t_beat_ns=t_beat / angular,
        definitions=dict(
            g_over_omega="g_mhz / (1000 omega_c_ghz)",
            t_rabi_ns="2 pi / (omega_c Omega_{2N-1}) with omega_c = "
                      "2 pi omega_c_ghz rad/ns",
            t_beat_ns="(4 pi / (g/omega_c)^2) |N(2N-1)/(N-5)| / omega_c"))
