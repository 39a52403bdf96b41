"""Thermal baths and the Landauer photonic heat flow.

Two resistive baths at temperatures T1 and T2 exchange thermal photons
through a linear two-port with transmission tau(f) = |S21(f)|^2. The net
power delivered to bath 2 is

    P_net = int_0^inf h f tau(f) (n1(f) - n2(f)) df,

with n the Bose occupation. Zero-point terms cancel in the difference and
are never integrated.
"""

from dataclasses import dataclass, field
import math
from typing import Protocol

import numpy as np

from . import _kernels
from .constants import H, K_B
from .errors import ParameterDomainError, QuadratureError
from .network import TwoPortABCD, ThermalPort, transmission_probability
from .quadrature import integrate

# Quantum of thermal conductance prefactor: P = QUANTUM_LIMIT_PREFACTOR (T1^2 - T2^2)
QUANTUM_LIMIT_PREFACTOR = math.pi**2 * K_B**2 / (6.0 * H)


class TransmissionProvider(Protocol):
    """Deterministic, thread-safe map f [Hz] -> tau(f) in [0, 1].

    Optional attributes used to steer the quadrature:
        resonances: bare resonance estimates [Hz]
        breakpoints: frequencies where tau is not smooth [Hz]
    """

    def __call__(self, f: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class ConstantTransmission:
    value: float = 1.0
    resonances: tuple = ()
    breakpoints: tuple = ()

    def __call__(self, f):
        return np.full(np.shape(f), float(self.value))


@dataclass(frozen=True)
class LorentzianTransmission:
    """peak / (1 + ((f - center) / half_width)^2)."""

    center: float
    half_width: float
    peak: float = 1.0

    @property
    def resonances(self):
        return (self.center,)

    breakpoints = ()

    def __call__(self, f):
        u = (np.asarray(f, dtype=np.float64) - self.center) / self.half_width
        return self.peak / (1.0 + u * u)


@dataclass(frozen=True)
class CircuitTransmission:
    """tau(f) = |S21|^2 of ``network(f)`` between real resistances r1, r2.

    ``network`` maps a frequency array to a :class:`TwoPortABCD`.
    """

    network: object
    r1: float
    r2: float
    resonances: tuple = ()
    breakpoints: tuple = ()

    def __call__(self, f):
        f = np.asarray(f, dtype=np.float64)
        m = self.network(np.atleast_1d(f))
        tau = transmission_probability(m, self.r1, self.r2, frequency=np.atleast_1d(f))
        return tau.reshape(f.shape)

    def abcd(self, f) -> TwoPortABCD:
        return self.network(f)


def bose_population(f, t):
    """Thermal photon occupation 1/(exp(hf/k_B T) - 1); zero at T = 0."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(f <= 0):
        raise ParameterDomainError("Bose population needs f > 0")
    if t < 0:
        raise ParameterDomainError(f"temperature must be >= 0, got {t}")
    if t == 0:
        return np.zeros_like(f)[()]
    with np.errstate(over="ignore"):
        return (1.0 / np.expm1(H * f / (K_B * t)))[()]


def johnson_nyquist_psd(port, f):
    """Source voltage noise 2 R h f / (1 - exp(-hf/k_B T)) in V^2/Hz.

    Defined for negative f as well; f = 0 gives the classical 2 R k_B T.
    """
    f = np.asarray(f, dtype=np.float64)
    r = port.resistance
    t = port.temperature
    out = np.empty_like(f)
    if t == 0:
        out[...] = np.where(f > 0, 2.0 * r * H * f, 0.0)
        return out[()]
    x = H * f / (K_B * t)
    zero = f == 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        val = 2.0 * r * H * f / (-np.expm1(-x))
    val = np.where(np.isfinite(val), val, 0.0)
    out[...] = np.where(zero, 2.0 * r * K_B * t, val)
    return out[()]


def net_power_spectral_density(tau, t1, t2, f, *, f_floor=1.0):
    """One-sided net power spectrum h f tau(f) (n1 - n2) in W/Hz.

    At f = 0 the continuous extension tau(0+) k_B (T1 - T2) is returned,
    with tau(0+) sampled at ``f_floor``.
    """
    f = np.asarray(f, dtype=np.float64)
    if np.any(f < 0):
        raise ParameterDomainError("net power spectral density needs f >= 0")
    if t1 < 0 or t2 < 0:
        raise ParameterDomainError("temperatures must be >= 0")
    flat = np.atleast_1d(f).ravel()
    zero = flat == 0
    out = np.empty_like(flat)
    if np.any(~zero):
        fp = np.ascontiguousarray(flat[~zero])
        tau_v = np.asarray(tau(fp), dtype=np.float64)
        out[~zero] = _kernels.net_psd(fp, tau_v, float(t1), float(t2))
    if np.any(zero):
        tau0 = float(np.asarray(tau(np.array([f_floor])))[0])
        out[zero] = tau0 * K_B * (t1 - t2)
    return out.reshape(f.shape)[()]


def incident_power_spectral_density(tau, t, f):
    """Diagnostic: h f tau(f) (n(f) + 1/2), the one-sided power incident on
    the opposite bath including the zero-point term. Not integrable without
    a cutoff; only the difference of two of these is physical.
    """
    f = np.asarray(f, dtype=np.float64)
    return H * f * np.asarray(tau(f)) * (bose_population(f, t) + 0.5)


def quantum_limited_power(t1, t2):
    """(pi^2 k_B^2 / 6h)(T1^2 - T2^2): the tau = 1 heat flow."""
    return QUANTUM_LIMIT_PREFACTOR * (t1 * t1 - t2 * t2)


@dataclass(frozen=True)
class QuadratureOptions:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-22
    max_evaluations: int = 200_000
    f_max: float = None
    f_min: float = 1.0
    thermal_quanta: float = 30.0
    resonance_factor: float = 3.0


def choose_f_max(t1, t2, resonances=(), opts=QuadratureOptions()):
    """Upper cutoff: enough thermal quanta for the hotter bath, and a margin
    above the highest bare resonance."""
    if opts.f_max is not None:
        return float(opts.f_max)
    thermal = opts.thermal_quanta * K_B * max(t1, t2) / H
    highest = max(resonances, default=0.0)
    return max(thermal, opts.resonance_factor * highest)


@dataclass
class HeatResult:
    """Net photonic power into bath 2 and the sampled integrand.

    ``frequencies``/``spectrum`` are the quadrature nodes (ascending) and the
    net power spectral density there.
    """

    net_power: float
    error_estimate: float
    f_max: float
    evaluations: int
    frequencies: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))
    spectrum: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))
    converged: bool = True

    @property
    def net_power_fW(self):
        return self.net_power * 1e15

    def samples(self):
        """Spectrum as a list of (f, S_Pnet) pairs."""
        return list(zip(self.frequencies.tolist(), self.spectrum.tolist()))


def _seed_breakpoints(resonances, breakpoints, f_min, f_max):
    pts = list(breakpoints)
    for r in resonances:
        if not (f_min < r < f_max):
            continue
        for rel in (0.0, 0.003, 0.01, 0.03, 0.1):
            pts.extend((r * (1 - rel), r * (1 + rel)))
    return sorted(p for p in pts if f_min < p < f_max)


def net_heat_flow(tau, t1, t2, opts=None):
    """Net Landauer power from bath 1 (T1) to bath 2 (T2) through ``tau``.

    Raises QuadratureError (carrying the partial HeatResult) when the
    evaluation budget is exhausted before the tolerance is met.
    """
    opts = opts or QuadratureOptions()
    if t1 < 0 or t2 < 0:
        raise ParameterDomainError("temperatures must be >= 0")
    if t1 == 0 and t2 == 0:
        raise ParameterDomainError("at least one bath must be above 0 K")
    resonances = tuple(getattr(tau, "resonances", ()) or ())
    breakpoints = tuple(getattr(tau, "breakpoints", ()) or ())
    f_min = float(opts.f_min)
    f_max = choose_f_max(t1, t2, resonances, opts)
    if not f_max > f_min:
        raise ParameterDomainError(f"f_max ({f_max}) must exceed f_min ({f_min})")

    def integrand(f):
        return _kernels.net_psd(f, np.asarray(tau(f), dtype=np.float64), float(t1), float(t2))

    res = integrate(
        integrand,
        f_min,
        f_max,
        breakpoints=_seed_breakpoints(resonances, breakpoints, f_min, f_max),
        rel_tol=opts.rel_tol,
        abs_tol=opts.abs_tol,
        max_evaluations=opts.max_evaluations,
    )
    # [0, f_min] sliver from the continuous extension at f -> 0
    sliver = float(integrand(np.array([f_min]))[0]) * f_min
    result = HeatResult(
        net_power=res.integral + sliver,
        error_estimate=res.error,
        f_max=f_max,
        evaluations=res.evaluations + 1,
        frequencies=res.nodes,
        spectrum=res.values,
        converged=res.converged,
    )
    if not res.converged:
        raise QuadratureError(
            f"quadrature did not converge within {opts.max_evaluations} evaluations "
            f"(estimate {result.net_power:.6g} W, error {result.error_estimate:.3g} W)",
            partial=result,
        )
    return result


def heat_flow_between(tau, port1: ThermalPort, port2: ThermalPort, opts=None):
    """Convenience wrapper taking the temperatures from two ports."""
    return net_heat_flow(tau, port1.temperature, port2.temperature, opts)


__all__ = [
    "ConstantTransmission",
    "CircuitTransmission",
    "HeatResult",
    "LorentzianTransmission",
    "QuadratureOptions",
    "TransmissionProvider",
    "bose_population",
    "choose_f_max",
    "heat_flow_between",
    "incident_power_spectral_density",
    "johnson_nyquist_psd",
    "net_heat_flow",
    "net_power_spectral_density",
    "quantum_limited_power",
]
