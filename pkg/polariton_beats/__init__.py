from polariton_beats.basis import ModelParams, BasisState, build_basis
from polariton_beats.basis import collective_operator, photon_operator
from polariton_beats.hamiltonians import ModelKind, build_hamiltonian
from polariton_beats.hamiltonians import crw_term, dse_term
from polariton_beats.spectral import EigenSystem, ObservableTrace
from polariton_beats.spectral import HybridSpec, diagonalize
from polariton_beats.spectral import propagate_spectral, propagate_ode
from polariton_beats.spectral import hybrid_propagate, observable_trace
from polariton_beats.spectral import convergence_check
from polariton_beats.sem import SemHamiltonian, PolaritonTriplet
from polariton_beats.sem import sem_hamiltonian, resonant_triplet
from polariton_beats.sem import numeric_triplet, tc_photon_count
from polariton_beats.perturbation import PerturbedEnergies, ground_shift
from polariton_beats.perturbation import fem_shift_sum, perturbed_energies
from polariton_beats.perturbation import dm_photon_count_approx
from polariton_beats.perturbation import beating_period, unit_conversion
from polariton_beats.beats import BeatFit, extract_beat
from polariton_beats.utils import TimeGrid


__version__ = "0.1"
