"""ABCD two-port algebra.

Chain matrices are held as complex arrays of shape ``(..., 2, 2)``: a scalar
frequency gives a single 2x2 matrix, an array of N frequencies gives N of
them. All element constructors describe reciprocal networks (det = 1).

Conversions to S-parameters assume real reference resistances R1 (port 1)
and R2 (port 2). Complex terminations are only handled by the closed forms
:func:`tau_series` and :func:`tau_parallel`.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from .errors import NumericalSingularityError, ParameterDomainError, SingularElementError
from .josephson import TransmonSpec, shunt_admittance


@dataclass(frozen=True, eq=False)
class TwoPortABCD:
    """Frequency-resolved chain matrix [[A, B], [C, D]].

    ``matrix`` has shape ``(..., 2, 2)``; the leading axes run over
    frequency samples. A is dimensionless, B in ohm, C in siemens.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape[-2:] != (2, 2):
            raise ValueError(f"ABCD matrix must have trailing shape (2, 2), got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_elements(cls, a, b, c, d):
        a, b, c, d = np.broadcast_arrays(*(np.asarray(x, dtype=np.complex128) for x in (a, b, c, d)))
        m = np.empty(a.shape + (2, 2), dtype=np.complex128)
        m[..., 0, 0] = a
        m[..., 0, 1] = b
        m[..., 1, 0] = c
        m[..., 1, 1] = d
        return cls(m)

    @classmethod
    def identity(cls, shape=()):
        m = np.zeros(tuple(shape) + (2, 2), dtype=np.complex128)
        m[..., 0, 0] = 1.0
        m[..., 1, 1] = 1.0
        return cls(m)

    @property
    def a(self):
        return self.matrix[..., 0, 0]

    @property
    def b(self):
        return self.matrix[..., 0, 1]

    @property
    def c(self):
        return self.matrix[..., 1, 0]

    @property
    def d(self):
        return self.matrix[..., 1, 1]

    @property
    def shape(self):
        return self.matrix.shape[:-2]

    def det(self):
        return self.a * self.d - self.b * self.c

    def reversed(self):
        """Same network seen from the other side: [[D, B], [C, A]] / det.

        Relative accuracy is limited to about eps * |A D| / |det|; for a chain
        of reciprocal elements, cascading them in reverse order is exact.
        """
        det = self.det()
        return TwoPortABCD.from_elements(self.d / det, self.b / det, self.c / det, self.a / det)

    def __matmul__(self, other):
        if not isinstance(other, TwoPortABCD):
            return NotImplemented
        return cascade([self, other])

    def __getitem__(self, idx):
        return TwoPortABCD(self.matrix[idx])

    def __repr__(self):
        return f"TwoPortABCD(shape={self.shape})"


# -- circuit elements -------------------------------------------------------


def _omega(f, *, strictly_positive):
    f = np.asarray(f, dtype=np.float64)
    if strictly_positive and np.any(f <= 0):
        raise SingularElementError("series capacitor is singular at f <= 0 (blocks DC)")
    if np.any(f < 0):
        raise ParameterDomainError("frequency must be >= 0")
    return 2.0 * np.pi * f


@dataclass(frozen=True)
class TransmissionLine:
    """Lossless line from per-length inductance [H/m], capacitance [F/m], length [m]."""

    inductance_per_length: float
    capacitance_per_length: float
    length: float

    def __post_init__(self):
        for name in ("inductance_per_length", "capacitance_per_length", "length"):
            if not getattr(self, name) > 0:
                raise ParameterDomainError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def characteristic_impedance(self):
        return math.sqrt(self.inductance_per_length / self.capacitance_per_length)

    @property
    def phase_velocity(self):
        return 1.0 / math.sqrt(self.inductance_per_length * self.capacitance_per_length)

    def phase_constant(self, f):
        """beta = omega sqrt(L_l C_l) in rad/m."""
        return 2.0 * np.pi * np.asarray(f, dtype=np.float64) / self.phase_velocity

    @property
    def quarter_wave_frequency(self):
        return self.phase_velocity / (4.0 * self.length)

    def abcd(self, f):
        return abcd_transmission_line(self, f)


@dataclass(frozen=True)
class SeriesImpedance:
    z: complex

    def abcd(self, f):
        shape = np.shape(f)
        return TwoPortABCD.from_elements(1.0, np.full(shape, self.z, dtype=complex), 0.0, 1.0)


@dataclass(frozen=True)
class ShuntAdmittance:
    y: complex

    def abcd(self, f):
        return abcd_shunt(np.full(np.shape(f), self.y, dtype=complex))


@dataclass(frozen=True)
class SeriesCapacitor:
    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ParameterDomainError(f"capacitance must be > 0, got {self.c}")

    def abcd(self, f):
        return abcd_series_capacitor(self.c, f)


@dataclass(frozen=True)
class TransmonShunt:
    """Linearised transmon to ground: C_s (+ C_JJ) in parallel with L_J."""

    transmon: TransmonSpec

    def admittance(self, f):
        return shunt_admittance(self.transmon, f)

    def abcd(self, f):
        return abcd_shunt(self.admittance(f))


def abcd_transmission_line(line, f):
    """[[cos bl, j Z0 sin bl], [j sin bl / Z0, cos bl]] of a lossless line."""
    w = _omega(f, strictly_positive=False)
    bl = w * line.length / line.phase_velocity
    z0 = line.characteristic_impedance
    cos_bl = np.cos(bl)
    sin_bl = np.sin(bl)
    return TwoPortABCD.from_elements(cos_bl, 1j * z0 * sin_bl, 1j * sin_bl / z0, cos_bl)


def abcd_series_capacitor(c, f):
    """[[1, 1/(j w c)], [0, 1]]; singular at f = 0."""
    if not c > 0:
        raise ParameterDomainError(f"capacitance must be > 0, got {c}")
    w = _omega(f, strictly_positive=True)
    return TwoPortABCD.from_elements(1.0, 1.0 / (1j * w * c), 0.0, 1.0)


def abcd_series(z):
    """[[1, z], [0, 1]] for a series impedance ``z`` (scalar or array)."""
    return TwoPortABCD.from_elements(1.0, z, 0.0, 1.0)


def abcd_shunt(y):
    """[[1, 0], [y, 1]] for a shunt admittance ``y`` (scalar or array)."""
    return TwoPortABCD.from_elements(1.0, 0.0, y, 1.0)


def element_abcd(element, f):
    """Chain matrix of any circuit element at ``f``."""
    return element.abcd(f)


def cascade(blocks):
    """Ordered product of chain matrices; the first block faces port 1.

    An empty sequence gives the identity. Blocks broadcast over their
    frequency axes.
    """
    blocks = list(blocks)
    if not blocks:
        return TwoPortABCD.identity()
    mats = [b.matrix for b in blocks]
    shape = np.broadcast_shapes(*(m.shape for m in mats))
    lead = shape[:-2]
    n = int(np.prod(lead)) if lead else 1
    stack = np.empty((len(mats), n, 2, 2), dtype=np.complex128)
    for i, m in enumerate(mats):
        stack[i] = np.broadcast_to(m, shape).reshape(n, 2, 2)
    out = _kernels.cascade(stack)
    return TwoPortABCD(out.reshape(shape))


def cascade_elements(elements, f):
    """Cascade circuit elements evaluated at ``f``; no elements gives the
    identity on the shape of ``f``."""
    elements = list(elements)
    if not elements:
        return TwoPortABCD.identity(np.shape(f))
    return cascade([e.abcd(f) for e in elements])


# -- conversions ------------------------------------------------------------


def _check_refs(r1, r2):
    if not (r1 > 0 and r2 > 0):
        raise ParameterDomainError(f"reference resistances must be > 0, got {r1}, {r2}")


def _denominator(m, r1, r2):
    return m.a + m.b / r2 + m.c * r1 + (r1 / r2) * m.d


def _raise_if_singular(den, frequency):
    bad = ~np.isfinite(den) | (den == 0)
    if np.any(bad):
        idx = np.flatnonzero(np.ravel(bad))[0]
        f_bad = None
        if frequency is not None:
            f_bad = float(np.ravel(np.broadcast_to(frequency, np.shape(den)))[idx])
        where = f" at f = {f_bad:.9g} Hz" if f_bad is not None else ""
        raise NumericalSingularityError(f"S-parameter denominator vanished{where}", f_bad)


def abcd_to_s21(m, r1, r2, frequency=None):
    """S21 = 2 sqrt(R1/R2) / (A + B/R2 + C R1 + (R1/R2) D).

    ``frequency`` is only used to report where a singular point occurred.
    """
    _check_refs(r1, r2)
    mat = m.matrix
    if mat.ndim == 3:
        out = _kernels.s21(np.ascontiguousarray(mat), float(r1), float(r2))
        if not np.all(np.isfinite(out)):
            _raise_if_singular(_denominator(m, r1, r2), frequency)
        return out
    den = _denominator(m, r1, r2)
    _raise_if_singular(den, frequency)
    return 2.0 * np.sqrt(r1 / r2) / den


def abcd_to_s11(m, r1, r2, frequency=None):
    """Input reflection (Z_in - R1)/(Z_in + R1) with port 2 loaded by R2."""
    _check_refs(r1, r2)
    den = _denominator(m, r1, r2)
    _raise_if_singular(den, frequency)
    return (m.a + m.b / r2 - m.c * r1 - m.d * (r1 / r2)) / den


def input_impedance(m, r2):
    """Z_in = (A + B/R2) / (C + D/R2) seen at port 1 with port 2 loaded by R2."""
    return (m.a + m.b / r2) / (m.c + m.d / r2)


def abcd_to_transfer_function(m, r1, r2, frequency=None):
    """Voltage transfer V_L / V_S = R2 / (A R2 + B + C R1 R2 + D R1)."""
    _check_refs(r1, r2)
    den = m.a * r2 + m.b + m.c * r1 * r2 + m.d * r1
    _raise_if_singular(den, frequency)
    return r2 / den


def transmission_probability(m, r1, r2, frequency=None):
    """tau = |S21|^2."""
    s = abcd_to_s21(m, r1, r2, frequency)
    return s.real**2 + s.imag**2


def direct_connection_tau(r1, r2):
    """4 R1 R2 / (R1 + R2)^2."""
    return 4.0 * r1 * r2 / (r1 + r2) ** 2


def tau_series(zb, z1, z2):
    """4 Re[Z1] Re[Z2] / |Z1 + Z2 + Z_B|^2 for a purely series black box."""
    zb, z1, z2 = (np.asarray(x, dtype=np.complex128) for x in (zb, z1, z2))
    if np.any(z1.real <= 0) or np.any(z2.real <= 0):
        raise ParameterDomainError("terminations must have positive resistance")
    return 4.0 * z1.real * z2.real / np.abs(z1 + z2 + zb) ** 2


def tau_parallel(zb, z1, z2):
    """4 Re[1/Z1] Re[1/Z2] / |1/Z1 + 1/Z2 + 1/Z_B|^2 for a shunt black box.

    ``zb = inf`` is an open shunt; ``zb = 0`` raises SingularElementError.
    """
    zb, z1, z2 = (np.asarray(x, dtype=np.complex128) for x in (zb, z1, z2))
    if np.any(z1.real <= 0) or np.any(z2.real <= 0):
        raise ParameterDomainError("terminations must have positive resistance")
    if np.any(zb == 0):
        raise SingularElementError("zero shunt impedance shorts the network")
    with np.errstate(invalid="ignore"):
        yb = np.where(np.isinf(zb), 0.0, 1.0 / np.where(np.isinf(zb), 1.0, zb))
    y1 = 1.0 / z1
    y2 = 1.0 / z2
    return 4.0 * y1.real * y2.real / np.abs(y1 + y2 + yb) ** 2


@dataclass(frozen=True)
class ThermalPort:
    """Resistive bath: resistance [ohm], temperature [K], optional reactance [ohm].

    Only :func:`tau_series` / :func:`tau_parallel` honour a non-zero
    reactance; the general ABCD conversions require it to be zero.
    """

    resistance: float
    temperature: float
    reactance: float = 0.0

    def __post_init__(self):
        if not self.resistance > 0:
            raise ParameterDomainError(f"port resistance must be > 0, got {self.resistance}")
        if not self.temperature >= 0:
            raise ParameterDomainError(f"port temperature must be >= 0, got {self.temperature}")

    @property
    def impedance(self):
        return complex(self.resistance, self.reactance)

    def require_resistive(self):
        if self.reactance != 0:
            raise ParameterDomainError(
                "complex terminations are only supported by tau_series/tau_parallel"
            )
        return self.resistance
