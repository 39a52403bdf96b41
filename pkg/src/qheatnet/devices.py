"""Reference devices and sweep drivers.

Three cascades are provided, with their published parameter sets:

* :class:`QuarterWaveDevice`: line(l1) - C_r - line(l2)
* :class:`QhvDevice`: line(l) - C_r - qubit - C_r - line(l)
* :class:`DoublePoleDevice`: line(l) - C_r - qubit - C_t - qubit - C_r - line(l)

plus :class:`DirectConnection` (empty cascade). Port 1 faces the left end.
Each qubit is a linearised transmon shunting its node to ground; its phase is
``pi * flux`` with flux in units of Phi_0.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import os

import numpy as np

from .errors import DescriptorError, ParameterDomainError, QHeatNetError, SingularElementError
from .josephson import JosephsonParams, TransmonSpec, josephson_inductance, lc_frequency
from .network import (
    SeriesCapacitor,
    ThermalPort,
    TransmissionLine,
    TransmonShunt,
    abcd_to_s11,
    abcd_to_s21,
    cascade_elements,
)
from .thermal import CircuitTransmission, QuadratureOptions, net_heat_flow

log = logging.getLogger(__name__)

# Published parameter values (SI)
LINE_INDUCTANCE = 405e-9  # H/m
LINE_CAPACITANCE = 171e-12  # F/m
CRITICAL_CURRENT = 72e-9  # A
QHV_ASYMMETRY = 0.08


def _normalize_flux(flux, arity):
    if flux is None:
        values = ()
    elif np.ndim(flux) == 0:
        values = (float(flux),)
    else:
        values = tuple(float(x) for x in flux)
    if len(values) != arity:
        raise DescriptorError(f"device takes {arity} flux value(s), got {len(values)}")
    return values


def _require_positive(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not value > 0:
            raise ParameterDomainError(f"{type(obj).__name__}.{name} must be > 0, got {value}")


@dataclass(frozen=True)
class DirectConnection:
    """No black box: the two ports are wired together."""

    flux_arity = 0

    def elements(self, flux=None):
        _normalize_flux(flux, 0)
        return []

    def resonances(self, flux=None):
        return ()


@dataclass(frozen=True)
class QuarterWaveDevice:
    inductance_per_length: float
    capacitance_per_length: float
    length_1: float
    length_2: float
    coupling_capacitance: float

    flux_arity = 0

    def __post_init__(self):
        _require_positive(self, ("inductance_per_length", "capacitance_per_length", "length_1",
                                 "length_2", "coupling_capacitance"))

    @classmethod
    def published(cls):
        return cls(LINE_INDUCTANCE, LINE_CAPACITANCE, 4723e-6, 580e-6, 23e-15)

    def _lines(self):
        return (
            TransmissionLine(self.inductance_per_length, self.capacitance_per_length, self.length_1),
            TransmissionLine(self.inductance_per_length, self.capacitance_per_length, self.length_2),
        )

    def elements(self, flux=None):
        _normalize_flux(flux, 0)
        line1, line2 = self._lines()
        return [line1, SeriesCapacitor(self.coupling_capacitance), line2]

    def resonances(self, flux=None):
        return (self._lines()[0].quarter_wave_frequency,)


def _qubit_resonance(transmon):
    try:
        return (lc_frequency(transmon),)
    except SingularElementError:
        return ()


@dataclass(frozen=True)
class QhvDevice:
    """Quantum heat valve: a transmon between two equal quarter-wave resonators."""

    inductance_per_length: float
    capacitance_per_length: float
    length: float
    coupling_capacitance: float
    transmon: TransmonSpec

    flux_arity = 1

    def __post_init__(self):
        _require_positive(self, ("inductance_per_length", "capacitance_per_length", "length",
                                 "coupling_capacitance"))

    @classmethod
    def published(cls, asymmetry=QHV_ASYMMETRY, junction_capacitance=0.0):
        transmon = TransmonSpec(
            JosephsonParams(CRITICAL_CURRENT, asymmetry),
            shunt_capacitance=96e-15,
            junction_capacitance=junction_capacitance,
        )
        return cls(LINE_INDUCTANCE, LINE_CAPACITANCE, 5119e-6, 10e-15, transmon)

    @property
    def line(self):
        return TransmissionLine(self.inductance_per_length, self.capacitance_per_length, self.length)

    def elements(self, flux=None):
        (phi,) = _normalize_flux(flux, 1)
        qubit = self.transmon.at_flux(phi)
        josephson_inductance(qubit.josephson)  # fail early at the divergent point
        cr = SeriesCapacitor(self.coupling_capacitance)
        return [self.line, cr, TransmonShunt(qubit), cr, self.line]

    def resonances(self, flux=None):
        (phi,) = _normalize_flux(flux, 1)
        return (self.line.quarter_wave_frequency,) + _qubit_resonance(self.transmon.at_flux(phi))


@dataclass(frozen=True)
class DoublePoleDevice:
    """Two transmons, coupled through C_t, between two quarter-wave resonators."""

    inductance_per_length: float
    capacitance_per_length: float
    length: float
    coupling_capacitance: float
    qubit_coupling_capacitance: float
    transmon_a: TransmonSpec
    transmon_b: TransmonSpec

    flux_arity = 2

    def __post_init__(self):
        _require_positive(self, ("inductance_per_length", "capacitance_per_length", "length",
                                 "coupling_capacitance", "qubit_coupling_capacitance"))

    @classmethod
    def published(cls, asymmetry=QHV_ASYMMETRY):
        transmon = TransmonSpec(JosephsonParams(CRITICAL_CURRENT, asymmetry), shunt_capacitance=61e-15)
        return cls(LINE_INDUCTANCE, LINE_CAPACITANCE, 5119e-6, 10e-15, 20e-15, transmon, transmon)

    @property
    def line(self):
        return TransmissionLine(self.inductance_per_length, self.capacitance_per_length, self.length)

    def elements(self, flux=None):
        phi_a, phi_b = _normalize_flux(flux, 2)
        qa = self.transmon_a.at_flux(phi_a)
        qb = self.transmon_b.at_flux(phi_b)
        josephson_inductance(qa.josephson)
        josephson_inductance(qb.josephson)
        cr = SeriesCapacitor(self.coupling_capacitance)
        ct = SeriesCapacitor(self.qubit_coupling_capacitance)
        return [self.line, cr, TransmonShunt(qa), ct, TransmonShunt(qb), cr, self.line]

    def resonances(self, flux=None):
        phi_a, phi_b = _normalize_flux(flux, 2)
        return (
            (self.line.quarter_wave_frequency,)
            + _qubit_resonance(self.transmon_a.at_flux(phi_a))
            + _qubit_resonance(self.transmon_b.at_flux(phi_b))
        )


def build_network(dev, flux, f):
    """Chain matrix of ``dev`` at the given flux bias and frequency (array)."""
    return cascade_elements(dev.elements(flux), f)


@dataclass(frozen=True)
class _Cascade:
    elements: tuple

    def __call__(self, f):
        return cascade_elements(self.elements, f)


def device_transmission(dev, flux, r1, r2):
    """TransmissionProvider for ``dev`` between real port resistances."""
    elements = tuple(dev.elements(flux))
    return CircuitTransmission(_Cascade(elements), r1, r2, resonances=tuple(dev.resonances(flux)))


def sparameters(dev, flux, f, r1, r2):
    """S21 and S11 of ``dev`` on the frequency grid ``f``."""
    f = np.atleast_1d(np.asarray(f, dtype=np.float64))
    m = build_network(dev, flux, f)
    return abcd_to_s21(m, r1, r2, frequency=f), abcd_to_s11(m, r1, r2, frequency=f)


# -- sweeps -----------------------------------------------------------------


@dataclass
class SweepPoint:
    """One sweep sample: its coordinates, and either a result or an error."""

    coords: dict
    result: object = None
    error: str = None

    @property
    def ok(self):
        return self.error is None

    @property
    def net_power(self):
        return self.result.net_power if self.result is not None else float("nan")


def resolve_threads(threads=None):
    """Explicit thread count, else QHEATNET_THREADS, else 1."""
    if threads is None:
        threads = os.environ.get("QHEATNET_THREADS", "1")
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def _run(tasks, threads):
    # tasks: list of (coords, zero-arg callable returning HeatResult)
    def one(task):
        coords, job = task
        try:
            return SweepPoint(coords, job())
        except QHeatNetError as exc:
            log.info("sweep point %s failed: %s", coords, exc)
            partial = getattr(exc, "partial", None)
            return SweepPoint(coords, partial, f"{type(exc).__name__}: {exc}")

    threads = resolve_threads(threads)
    if threads == 1:
        return [one(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, tasks))


def flux_coords(flux):
    values = (float(flux),) if np.ndim(flux) == 0 else tuple(float(x) for x in flux)
    keys = ("flux_phi0", "flux2_phi0")
    return {keys[i]: v for i, v in enumerate(values)}


def flux_grid_2d(flux_a, flux_b):
    """Row-major grid of (flux_a, flux_b) pairs."""
    return [(float(a), float(b)) for a in flux_a for b in flux_b]


def sweep_flux(dev, flux_points, ports, opts=None, threads=None):
    """Heat flow at each flux point (scalars, or pairs for the double-pole device).

    Failed points are returned with ``error`` set; the sweep continues.
    """
    port1, port2 = ports
    r1, r2 = port1.require_resistive(), port2.require_resistive()
    opts = opts or QuadratureOptions()

    def job(flux):
        return lambda: net_heat_flow(
            device_transmission(dev, flux, r1, r2), port1.temperature, port2.temperature, opts
        )

    return _run([(flux_coords(p), job(p)) for p in flux_points], threads)


def sweep_resistance(dev, resistances, ports, flux=None, opts=None, threads=None, port="both"):
    """Heat flow while varying port resistance: ``port`` 1, 2 or "both" (R1 = R2 = R)."""
    if port not in (1, 2, "both"):
        raise ValueError(f"port must be 1, 2 or 'both', got {port!r}")
    port1, port2 = ports
    opts = opts or QuadratureOptions()
    key = "R_ohm" if port == "both" else f"R{port}_ohm"

    def job(r):
        p1 = replace(port1, resistance=r) if port in (1, "both") else port1
        p2 = replace(port2, resistance=r) if port in (2, "both") else port2
        return lambda: net_heat_flow(
            device_transmission(dev, flux, p1.require_resistive(), p2.require_resistive()),
            p1.temperature, p2.temperature, opts,
        )

    return _run([({key: float(r)}, job(float(r))) for r in resistances], threads)


def sweep_temperature(dev, temperatures, ports, flux=None, opts=None, threads=None, tau=None):
    """Heat flow while varying the temperature of port 1.

    ``tau`` replaces the device's own transmission (e.g. an ingested table);
    ``dev`` is then ignored.
    """
    port1, port2 = ports
    opts = opts or QuadratureOptions()
    if tau is None:
        tau = device_transmission(dev, flux, port1.require_resistive(), port2.require_resistive())

    def job(t):
        return lambda: net_heat_flow(tau, t, port2.temperature, opts)

    return _run([({"T1_K": float(t)}, job(float(t))) for t in temperatures], threads)


__all__ = [
    "DirectConnection",
    "DoublePoleDevice",
    "QhvDevice",
    "QuarterWaveDevice",
    "SweepPoint",
    "ThermalPort",
    "build_network",
    "device_transmission",
    "flux_grid_2d",
    "sparameters",
    "sweep_flux",
    "sweep_resistance",
    "sweep_temperature",
]
