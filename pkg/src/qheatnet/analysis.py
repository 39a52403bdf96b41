"""Post-processing of sweeps and spectra: modulation, peaks, linewidths."""

import numpy as np
from scipy import ndimage, optimize, signal


def modulation_ratio(powers):
    """(P_max - P_min) / P_max over the finite entries of ``powers``."""
    p = np.asarray(powers, dtype=np.float64)
    p = p[np.isfinite(p)]
    if p.size == 0:
        return float("nan")
    return float((p.max() - p.min()) / p.max())


def peak_frequencies(f, magnitude, prominence=0.05):
    """Frequencies of local maxima of ``magnitude`` with the given prominence."""
    idx, _ = signal.find_peaks(np.asarray(magnitude), prominence=prominence)
    return np.asarray(f)[idx]


def count_avoided_crossings(flux, f, magnitude_map, reference, guard, prominence=0.05):
    """Count avoided crossings of a tunable branch with a fixed mode.

    ``magnitude_map[i]`` is |S21| over ``f`` at ``flux[i]``. A tunable mode
    passing ``reference`` repels from it instead of crossing, so the number of
    peaks above ``reference + guard`` changes by one at each anticrossing;
    those changes are counted along the flux axis.
    """
    above = [
        int(np.count_nonzero(peak_frequencies(f, row, prominence) > reference + guard))
        for row in magnitude_map
    ]
    return int(np.count_nonzero(np.diff(above))), above


def branch_frequency(f, magnitude_map, guess, prominence=0.05):
    """Median over rows of the peak nearest ``guess``: a flux-independent branch."""
    picks = []
    for row in magnitude_map:
        peaks = peak_frequencies(f, row, prominence)
        if peaks.size:
            picks.append(peaks[np.argmin(np.abs(peaks - guess))])
    return float(np.median(picks)) if picks else float("nan")


def local_maxima_2d(grid, threshold=0.5, periodic=True):
    """Indices of local maxima of a 2-D map above ``threshold * max``.

    Neighbourhood is 3x3; with ``periodic`` the edges wrap (flux maps).
    """
    grid = np.asarray(grid, dtype=np.float64)
    mode = "wrap" if periodic else "nearest"
    is_max = ndimage.maximum_filter(grid, size=3, mode=mode) == grid
    is_max &= grid >= threshold * np.nanmax(grid)
    labels, n = ndimage.label(is_max)
    # plateau of equal neighbours counts once
    centers = ndimage.center_of_mass(is_max, labels, range(1, n + 1))
    return [tuple(int(round(c)) for c in cm) for cm in centers]


def lorentzian_power(f, amplitude, center, quality, order=1):
    """amplitude / (1 + (2 Q (f - f0) / f0)^2)^order."""
    u = 2.0 * quality * (f - center) / center
    return amplitude / (1.0 + u * u) ** order


def fit_quality_factor(f, tau, order=1, window=3.0):
    """Fit a (power of a) Lorentzian to the main peak of ``tau``.

    ``order`` is the number of identical resonators the photon crosses in
    series, each contributing one Lorentzian factor to tau. Returns
    ``(quality, center)``.
    """
    f = np.asarray(f, dtype=np.float64)
    tau = np.asarray(tau, dtype=np.float64)
    i = int(np.argmax(tau))
    half = tau[i] / 2.0
    lo = i
    while lo > 0 and tau[lo] > half:
        lo -= 1
    hi = i
    while hi < len(tau) - 1 and tau[hi] > half:
        hi += 1
    fwhm = max(f[hi] - f[lo], f[1] - f[0])
    q0 = f[i] / fwhm * np.sqrt(2.0 ** (1.0 / order) - 1.0)
    sel = np.abs(f - f[i]) <= window * fwhm / 2.0

    def model(x, a, c, q):
        return lorentzian_power(x, a, c, q, order)

    (amp, center, quality), _ = optimize.curve_fit(model, f[sel], tau[sel], p0=(tau[i], f[i], q0))
    return float(abs(quality)), float(center)
