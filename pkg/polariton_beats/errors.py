class BeatLabError(Exception):
    """Base class for every error raised by polariton_beats"""


class ParameterDomainError(BeatLabError, ValueError):
    """Model parameters, operator names or config values outside
    their allowed domain"""


class ContractError(BeatLabError):
    """An operation was called with inputs that break its precondition,
    such as a non-Hermitian matrix or mismatched dimensions"""


class StepSizeError(BeatLabError):
    """The fixed-step integrator drifted off the unit sphere; rerun with
    a smaller dt_max"""


class MatchingError(BeatLabError):
    """Eigenpairs of two models could not be paired unambiguously"""


class ManifoldDomainError(BeatLabError):
    """Second-excitation-manifold analytics need at least two emitters"""


class SingularityError(BeatLabError):
    """A perturbative denominator vanished (2 omega == Omega)"""


class FitError(BeatLabError):
    """The beat template could not be fitted to a trace"""


class ValidityWarning(UserWarning):
    """Coupling above the range the perturbative results were validated in"""


class CutoffPolicyWarning(UserWarning):
    """Photon cutoff below the N + 2 default policy"""


class ConvergenceWarning(UserWarning):
    """Doubling the photon cutoff changed the photon trace"""


class NormalizationWarning(UserWarning):
    """A mixed-model reconstruction drifted away from unit norm"""
