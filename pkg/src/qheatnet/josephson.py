"""Linearised SQUID/transmon physics.

The flux-biased SQUID is replaced by a linear inductor whose value depends
on the gauge-invariant phase ``delta = pi * Phi / Phi_0`` and on the
junction asymmetry ``d = (I_c1 - I_c2) / (I_c1 + I_c2)``.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .constants import E_CHARGE, H, PHI_0
from .errors import ParameterDomainError, SingularInductanceError


@dataclass(frozen=True)
class JosephsonParams:
    """Inputs of the SQUID linearisation.

    Attributes:
        critical_current: total critical current I_C_sigma [A].
        asymmetry: d in [0, 1).
        phase: delta [rad]; use :meth:`at_flux` to set it from flux.
    """

    critical_current: float
    asymmetry: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not self.critical_current > 0:
            raise ParameterDomainError(
                f"critical current must be > 0, got {self.critical_current}"
            )
        if not 0.0 <= self.asymmetry < 1.0:
            raise ParameterDomainError(f"asymmetry must be in [0, 1), got {self.asymmetry}")

    def at_flux(self, flux):
        """Copy with ``phase = pi * flux`` (flux in units of Phi_0)."""
        return replace(self, phase=math.pi * float(flux))

    @property
    def flux(self):
        return self.phase / math.pi


def _phase_factor(asymmetry, phase):
    # |cos d| sqrt(1 + d^2 tan^2 d) == sqrt(cos^2 + d^2 sin^2): finite at pi/2
    c = math.cos(phase)
    s = math.sin(phase)
    return math.sqrt(c * c + asymmetry * asymmetry * s * s)


def josephson_inductance(p):
    """Linearised SQUID inductance L_J(delta) in henry.

    Raises SingularInductanceError at d = 0, cos(delta) = 0.
    """
    factor = _phase_factor(p.asymmetry, p.phase)
    # cos(pi/2) evaluates to ~6e-17, not 0: treat that as the divergent point
    if p.asymmetry == 0.0 and abs(math.cos(p.phase)) < 1e-12:
        raise SingularInductanceError(
            f"Josephson inductance diverges at phase {p.phase:.6g} rad "
            f"(flux {p.flux:.6g} Phi_0) with zero asymmetry"
        )
    return PHI_0 / (2.0 * math.pi * p.critical_current * factor)


def josephson_energy(p):
    """E_J(delta) = (Phi_0 / 2 pi)^2 / L_J in joule."""
    return (PHI_0 / (2.0 * math.pi)) ** 2 / josephson_inductance(p)


def charging_energy(island_capacitance):
    """E_C = e^2 / (2 C_sigma) in joule."""
    if not island_capacitance > 0:
        raise ParameterDomainError(
            f"island capacitance must be > 0, got {island_capacitance}"
        )
    return E_CHARGE**2 / (2.0 * island_capacitance)


@dataclass(frozen=True)
class TransmonSpec:
    """A capacitively shunted SQUID.

    ``island_capacitance`` (C_sigma) only feeds the charging energy used for
    :func:`transmon_frequency`; it defaults to the shunt capacitance. The
    junction capacitance is electrically in parallel with the shunt and is
    folded into it when the circuit is built.
    """

    josephson: JosephsonParams
    shunt_capacitance: float
    island_capacitance: float = None
    junction_capacitance: float = 0.0

    def __post_init__(self):
        if not self.shunt_capacitance > 0:
            raise ParameterDomainError(
                f"shunt capacitance must be > 0, got {self.shunt_capacitance}"
            )
        if self.junction_capacitance < 0:
            raise ParameterDomainError(
                f"junction capacitance must be >= 0, got {self.junction_capacitance}"
            )
        if self.island_capacitance is None:
            object.__setattr__(self, "island_capacitance", self.shunt_capacitance)
        elif not self.island_capacitance > 0:
            raise ParameterDomainError(
                f"island capacitance must be > 0, got {self.island_capacitance}"
            )

    @property
    def charging_energy(self):
        return charging_energy(self.island_capacitance)

    @property
    def total_shunt_capacitance(self):
        return self.shunt_capacitance + self.junction_capacitance

    def at_flux(self, flux):
        return replace(self, josephson=self.josephson.at_flux(flux))


def transmon_frequency(t):
    """Harmonic transmon frequency sqrt(8 E_J E_C) / h in hertz."""
    return math.sqrt(8.0 * josephson_energy(t.josephson) * t.charging_energy) / H


def lc_frequency(t):
    """Bare LC resonance of the linearised island, 1/(2 pi sqrt(L_J C)).

    Uses the shunt plus junction capacitance; this is the frequency at which
    the qubit shunt admittance crosses zero.
    """
    lj = josephson_inductance(t.josephson)
    return 1.0 / (2.0 * math.pi * math.sqrt(lj * t.total_shunt_capacitance))


def shunt_admittance(t, f):
    """Admittance 1/Z_C + 1/Z_J of the linearised transmon at ``f`` [S]."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(f <= 0):
        raise ParameterDomainError("transmon shunt requires f > 0")
    w = 2.0 * np.pi * f
    lj = josephson_inductance(t.josephson)
    return 1j * w * t.total_shunt_capacitance + 1.0 / (1j * w * lj)
