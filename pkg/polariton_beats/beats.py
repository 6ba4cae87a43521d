"""Beat extraction from photon-count traces

The fitted template is

    y(t) = D + A cos(2 Omega t) - B cos(alpha t) cos(Omega t)

where Omega is the carrier (Rabi) frequency and alpha the envelope
frequency. The carrier is located on a windowed FFT with quadratic peak
interpolation, (Omega, alpha) are then found on a grid with the linear
coefficients (D, A, B) projected out, and all five parameters are refined
with nonlinear least squares.
"""

from polariton_beats.errors import ContractError, FitError
from dataclasses import dataclass, asdict
from typing import Optional
import scipy.optimize
import scipy.signal
import numpy as np


# alpha is searched in [0, ALPHA_SEARCH * Omega]
ALPHA_SEARCH = 0.25
MIN_CARRIER_PERIODS = 4
MIN_SAMPLES_PER_PERIOD = 8
FLAT_TOLERANCE = 1e-12
COARSE_SAMPLES_PER_PERIOD = 10
GRID_BLOCK = 64


@dataclass(frozen=True)
class BeatFit:
    """The result of fitting the beat template to a trace

    Attributes:

    omega_fit: float
        the carrier frequency, 0.0 only for a flat trace
    alpha_fit: float
        the envelope frequency, 0.0 when no sidebands are resolved
    modulation_depth: float
        (max e - min e) / (max e + min e) of e = |cos(alpha_fit t)| over
        the trace window
    residual: float
        the RMS of the fit residual
    envelope_minimum: float
        the first envelope zero inside the window, None if there is none
    offset, carrier_amplitude, beat_amplitude: float
        the fitted linear coefficients D, A and B
    """

    omega_fit: float
    alpha_fit: float
    modulation_depth: float
    residual: float
    envelope_minimum: Optional[float] = None
    offset: float = 0.0
    carrier_amplitude: float = 0.0
    beat_amplitude: float = 0.0

    def to_dict(self):
        return asdict(self)


def gaussian_window(count, sigma=0.2):
    i = np.arange(count)
    middle = (count - 1) / 2.0
    return np.exp(-((i - middle) ** 2) / (2.0 * (sigma * count) ** 2))


def qint3(ym1, y0, yp1):
    """Quadratic interpolation of 3 uniformly spaced samples

    Returns the extremum location p, height y, and half-curvature a of the
    parabola y(x) = a (x - p)^2 + b through y(-1) = ym1, y(0) = y0 and
    y(1) = yp1.
    """

    denominator = 2.0 * (2.0 * y0 - yp1 - ym1)
    p = 0.0 if denominator == 0 else (yp1 - ym1) / denominator
    y = y0 - 0.25 * (ym1 - yp1) * p
    a = 0.5 * (ym1 - 2.0 * y0 + yp1)
    return p, y, a


def spectral_peaks(values, dt):
    """Find the local maxima of the windowed magnitude spectrum

    Args:

    values: np.ndarray
        the real samples
    dt: float
        the sample spacing

    Returns:

    frequencies: np.ndarray
        angular frequencies of the peaks, refined by quadratic
        interpolation of the log magnitude
    heights: np.ndarray
        the interpolated peak magnitudes
    bin_width: float
        the angular frequency spacing of the FFT bins
    """

    count = values.size
    spectrum = np.abs(np.fft.rfft(
        (values - np.mean(values)) * gaussian_window(count)))
    if spectrum.size < 5:
        raise ContractError(
            f"{count} samples are too few to locate a carrier")
    bin_width = 2.0 * np.pi / (count * dt)

    # bins 0 and 1 hold the leakage of the constant offset
    peaks, _ = scipy.signal.find_peaks(spectrum)
    peaks = peaks[peaks >= 2]
    if not peaks.size:
        raise ContractError("the trace spectrum has no peak to fit")

    log = np.log(np.maximum(spectrum, 1e-300))
    frequencies, heights = [], []
    for peak in peaks:
        p, y, _ = qint3(log[peak - 1], log[peak], log[peak + 1])
        frequencies.append((peak + p) * bin_width)
        heights.append(np.exp(y))
    return np.array(frequencies), np.array(heights), bin_width


def carrier_candidates(values, dt):
    """The strongest spectral peak and, when a second strong peak sits
    within the sideband search range, the midpoint of the two

    Resolved sidebands Omega +- alpha put the largest peak off the carrier
    by alpha, so both guesses are handed to the grid search.

    Returns:

    candidates: list of float
        carrier guesses, strongest peak first
    bin_width: float
        the angular frequency spacing of the FFT bins
    """

    frequencies, heights, bin_width = spectral_peaks(values, dt)
    order = np.argsort(heights)[::-1]
    top = frequencies[order[0]]
    candidates = [top]
    for i in order[1:]:
        if heights[i] < 0.3 * heights[order[0]]:
            break
        if abs(frequencies[i] - top) <= 2.0 * ALPHA_SEARCH * top:
            candidates.append(0.5 * (top + frequencies[i]))
            break
    return candidates, bin_width


def beat_template(times, offset, carrier, beat, omega, alpha):
    return offset + carrier * np.cos(2.0 * omega * times) - \
        beat * np.cos(alpha * times) * np.cos(omega * times)


def _design(times, omega, alpha):
    return np.stack([np.ones_like(times), np.cos(2.0 * omega * times),
                     -np.cos(alpha * times) * np.cos(omega * times)], axis=1)


def _project(times, values, omega, alpha):
    """The least squares (D, A, B) for fixed frequencies and its cost"""

    design = _design(times, omega, alpha)
    try:
        coefficients = np.linalg.lstsq(design, values, rcond=None)[0]
    except np.linalg.LinAlgError as error:
        raise FitError(f"linear projection failed: {error}") from error
    residual = values - design @ coefficients
    return float(residual @ residual), coefficients


def _decimate(times, values, omega):
    """Keep about COARSE_SAMPLES_PER_PERIOD samples per carrier period"""

    dt = times[1] - times[0]
    period = 2.0 * np.pi / omega
    stride = max(1, int(period / (dt * COARSE_SAMPLES_PER_PERIOD)))
    return times[::stride], values[::stride]


def _grid_costs(times, values, omega, alphas):
    """Projected least squares costs for one carrier and many alphas

    The 3x3 normal equations of (D, A, B) are assembled for a block of
    alphas at a time and solved together.
    """

    carrier = np.cos(2.0 * omega * times)
    base = np.cos(omega * times)
    fixed = np.array([[times.size, carrier.sum()],
                      [carrier.sum(), carrier @ carrier]])
    fixed_rhs = np.array([values.sum(), carrier @ values])

    costs = np.empty(alphas.size)
    for start in range(0, alphas.size, GRID_BLOCK):
        block = alphas[start:start + GRID_BLOCK]
        beat = -np.cos(np.outer(block, times)) * base
        gram = np.empty((block.size, 3, 3))
        gram[:, :2, :2] = fixed
        gram[:, 0, 2] = gram[:, 2, 0] = beat.sum(axis=1)
        gram[:, 1, 2] = gram[:, 2, 1] = beat @ carrier
        gram[:, 2, 2] = np.einsum("ij,ij->i", beat, beat)
        rhs = np.empty((block.size, 3))
        rhs[:, :2] = fixed_rhs
        rhs[:, 2] = beat @ values
        coefficients = np.einsum("kij,kj->ki", np.linalg.pinv(gram), rhs)
        costs[start:start + block.size] = values @ values - np.einsum(
            "ki,ki->k", coefficients, rhs)
    return costs


def grid_search(times, values, omega_guesses, bin_width):
    """Scan (Omega, alpha) around each FFT carrier guess with the linear
    coefficients projected out

    The scan runs on a decimated copy of the trace; the linear
    coefficients of the best point are then projected on every sample.

    Returns:

    x0: np.ndarray
        (D, A, B, Omega, alpha) at the lowest cost on the grid
    """

    span = times[-1] - times[0]
    offsets = bin_width * np.linspace(-0.5, 0.5, 11)
    omegas = np.concatenate([guess + offsets for guess in omega_guesses])
    alpha_max = ALPHA_SEARCH * max(omega_guesses)
    alphas = np.linspace(0.0, alpha_max, max(
        int(np.ceil(alpha_max * span / (np.pi / 4.0))) + 1, 16))
    coarse_times, coarse_values = _decimate(
        times, values, max(omega_guesses) * (1.0 + ALPHA_SEARCH))

    best = (np.inf, None, None)
    for omega in omegas[omegas > 0]:
        costs = _grid_costs(coarse_times, coarse_values, omega, alphas)
        i = int(np.nanargmin(costs)) if np.any(np.isfinite(costs)) else None
        if i is not None and costs[i] < best[0]:
            best = (costs[i], omega, alphas[i])
    if best[1] is None:
        raise FitError("no grid point produced a finite fit")
    _, coefficients = _project(times, values, best[1], best[2])
    return np.concatenate([coefficients, [best[1], best[2]]])



def cosine_range(phase_start, phase_stop):
    """min and max of |cos x| for x in [phase_start, phase_stop]"""

    lo, hi = sorted((phase_start, phase_stop))
    ends = np.abs(np.cos([lo, hi]))
    has_peak = np.floor(hi / np.pi) >= np.ceil(lo / np.pi)
    has_zero = np.floor(hi / np.pi - 0.5) >= np.ceil(lo / np.pi - 0.5)
    return (0.0 if has_zero else float(np.min(ends)),
            1.0 if has_peak else float(np.max(ends)))


def modulation_depth(alpha, t_start, t_stop):
    """Depth of the envelope |cos(alpha t)| over [t_start, t_stop]"""

    if alpha <= 0:
        return 0.0
    lo, hi = cosine_range(alpha * t_start, alpha * t_stop)
    return 0.0 if hi + lo == 0 else (hi - lo) / (hi + lo)


def envelope_minimum(alpha, t_start, t_stop):
    """The first zero of cos(alpha t) at or after t_start, None when it
    falls outside the window"""

    if alpha <= 0:
        return None
    k = np.ceil((alpha * t_start - 0.5 * np.pi) / np.pi)
    t = (0.5 * np.pi + k * np.pi) / alpha
    return float(t) if t <= t_stop else None


def extract_beat(trace):
    """Fit the beat template to an observable trace

    Args:

    trace: ObservableTrace
        a photon-count trace covering at least 4 carrier periods with at
        least 8 samples per carrier period

    Returns:

    fit: BeatFit
        the carrier and envelope frequencies with the modulation depth;
        a flat trace gives a fit with every frequency zero
    """

    times = np.asarray(trace.times, dtype=float)
    values = np.asarray(trace.values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(values))))
    if np.ptp(values) <= FLAT_TOLERANCE * scale:
        return BeatFit(0.0, 0.0, 0.0, float(np.std(values)),
                       offset=float(np.mean(values)))

    guesses, bin_width = carrier_candidates(values, trace.grid.dt)
    span = times[-1] - times[0]
    period = 2.0 * np.pi / guesses[0]
    if span < MIN_CARRIER_PERIODS * period:
        raise ContractError(
            f"trace spans {span / period:.2f} carrier periods, "
            f"need at least {MIN_CARRIER_PERIODS}")
    if period / trace.grid.dt < MIN_SAMPLES_PER_PERIOD:
        raise ContractError(
            f"trace has {period / trace.grid.dt:.2f} samples per carrier "
            f"period, need at least {MIN_SAMPLES_PER_PERIOD}")

    x0 = grid_search(times, values, guesses, bin_width)
    result = scipy.optimize.least_squares(
        lambda x: beat_template(times, *x) - values, x0, x_scale="jac")
    if not result.success or not np.all(np.isfinite(result.x)):
        raise FitError(f"beat refinement failed: {result.message}")

    x = result.x
    if np.sum(result.fun ** 2) > np.sum(
            (beat_template(times, *x0) - values) ** 2):
        x = x0
    offset, carrier, beat, omega, alpha = (float(v) for v in x)
    omega, alpha = abs(omega), abs(alpha)

    # without a beat term there are no sidebands to resolve
    if abs(beat) <= 1e-9 * scale or alpha * span < 1e-3:
        alpha = 0.0

    residual = float(np.sqrt(np.mean(
        (beat_template(times, *x) - values) ** 2)))
    return BeatFit(
        omega_fit=omega, alpha_fit=alpha,
        modulation_depth=modulation_depth(alpha, times[0], times[-1]),
        residual=residual,
        envelope_minimum=envelope_minimum(alpha, times[0], times[-1]),
        offset=offset, carrier_amplitude=carrier, beat_amplitude=beat)
