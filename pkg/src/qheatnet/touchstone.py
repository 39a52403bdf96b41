"""Touchstone v1 two-port (.s2p) reading/writing and table interpolation.

Only version-1 files are accepted. The option line
``# <unit> S <RI|MA|DB> R <ohms>`` may list its fields in any order;
missing fields take the format defaults (GHz, MA, 50 ohm). Data rows hold
``f S11 S21 S12 S22`` as pairs of numbers in the declared format.
"""

from dataclasses import dataclass
import io
import math
import os
import warnings

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ReferenceImpedanceError, TouchstoneError

FREQ_UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
FORMATS = ("RI", "MA", "DB")
PASSIVITY_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class SParameterTable:
    """Two-port S-parameters on an ascending frequency grid [Hz].

    ``s`` has shape (N, 2, 2) with ``s[:, 1, 0]`` = S21.
    """

    frequencies: np.ndarray
    s: np.ndarray
    reference: tuple = (50.0, 50.0)
    source: str = ""

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=np.float64)
        s = np.asarray(self.s, dtype=np.complex128)
        if f.ndim != 1 or s.shape != (f.size, 2, 2):
            raise ValueError(f"shape mismatch: frequencies {f.shape}, s {s.shape}")
        if f.size == 0:
            raise ValueError("empty S-parameter table")
        if np.any(np.diff(f) <= 0):
            raise ValueError("frequency grid must be strictly ascending")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "reference", tuple(float(r) for r in self.reference))
        peak = float(np.max(np.abs(self.s21)))
        if peak > 1.0 + PASSIVITY_SLACK:
            warnings.warn(f"|S21| reaches {peak:.6g} > 1: data is not passive", stacklevel=2)

    @property
    def s11(self):
        return self.s[:, 0, 0]

    @property
    def s21(self):
        return self.s[:, 1, 0]

    @property
    def s12(self):
        return self.s[:, 0, 1]

    @property
    def s22(self):
        return self.s[:, 1, 1]

    @property
    def reciprocity_error(self):
        """max |S12 - S21|: a data-quality metric, not enforced."""
        return float(np.max(np.abs(self.s12 - self.s21)))

    def __len__(self):
        return self.frequencies.size


def _to_complex(x, y, fmt):
    if fmt == "RI":
        return complex(x, y)
    mag = 10.0 ** (x / 20.0) if fmt == "DB" else x
    ang = math.radians(y)
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def _parse_option_line(tokens, lineno):
    unit, fmt, ref = "GHZ", "MA", 50.0
    i = 0
    while i < len(tokens):
        tok = tokens[i].upper()
        if tok in FREQ_UNITS:
            unit = tok
        elif tok in FORMATS:
            fmt = tok
        elif tok == "S":
            pass
        elif tok in ("Y", "Z", "H", "G"):
            raise TouchstoneError(f"only S-parameters are supported, got {tok}", lineno)
        elif tok == "R":
            if i + 1 >= len(tokens):
                raise TouchstoneError("option 'R' needs a reference resistance", lineno)
            try:
                ref = float(tokens[i + 1])
            except ValueError:
                raise TouchstoneError(f"bad reference resistance {tokens[i + 1]!r}", lineno) from None
            if not ref > 0:
                raise TouchstoneError(f"reference resistance must be > 0, got {ref}", lineno)
            i += 1
        else:
            raise TouchstoneError(f"unrecognised option {tokens[i]!r}", lineno)
        i += 1
    return FREQ_UNITS[unit], fmt, ref


def parse_touchstone(content, source=""):
    """Parse Touchstone v1 two-port text (``str`` or ``bytes``)."""
    if isinstance(content, bytes):
        content = content.decode("utf-8-sig")
    scale, fmt, ref = 1e9, "MA", 50.0
    option_seen = False
    freqs = []
    rows = []
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            raise TouchstoneError("Touchstone v2 keywords are not supported (v1 only)", lineno)
        if line.startswith("#"):
            if option_seen:
                raise TouchstoneError("duplicate option line", lineno)
            if freqs:
                raise TouchstoneError("option line after data", lineno)
            scale, fmt, ref = _parse_option_line(line[1:].split(), lineno)
            option_seen = True
            continue
        tokens = line.split()
        if len(tokens) != 9:
            raise TouchstoneError(f"expected 9 columns for a two-port row, got {len(tokens)}", lineno)
        try:
            values = [float(t) for t in tokens]
        except ValueError as exc:
            raise TouchstoneError(f"non-numeric value ({exc})", lineno) from None
        f = values[0] * scale
        if freqs and f <= freqs[-1]:
            raise TouchstoneError("frequencies must be strictly ascending", lineno)
        s11, s21, s12, s22 = (_to_complex(values[k], values[k + 1], fmt) for k in (1, 3, 5, 7))
        freqs.append(f)
        rows.append(((s11, s12), (s21, s22)))
    if not freqs:
        raise TouchstoneError("no data rows")
    return SParameterTable(np.array(freqs), np.array(rows), (ref, ref), source)


def read_touchstone(path):
    with open(path, "rb") as fh:
        return parse_touchstone(fh.read(), source=os.fspath(path))


def format_touchstone(table, fmt="RI", unit="HZ"):
    """Touchstone v1 text for ``table``; values written with full precision."""
    fmt = fmt.upper()
    unit = unit.upper()
    if fmt not in FORMATS or unit not in FREQ_UNITS:
        raise ValueError(f"unsupported format/unit {fmt}/{unit}")
    if table.reference[0] != table.reference[1]:
        raise ValueError("Touchstone v1 needs a single reference resistance")
    out = io.StringIO()
    if table.source:
        out.write(f"! {table.source}\n")
    out.write(f"# {unit} S {fmt} R {table.reference[0]!r}\n")
    scale = FREQ_UNITS[unit]
    for f, m in zip(table.frequencies, table.s):
        cols = [repr(float(f) / scale)]
        for z in (m[0, 0], m[1, 0], m[0, 1], m[1, 1]):
            if fmt == "RI":
                x, y = z.real, z.imag
            else:
                mag = abs(z)
                x = 20.0 * math.log10(max(mag, 1e-300)) if fmt == "DB" else mag
                y = math.degrees(math.atan2(z.imag, z.real))
            cols += [repr(float(x)), repr(float(y))]
        out.write(" ".join(cols) + "\n")
    return out.getvalue()


def write_touchstone(table, path, fmt="RI", unit="HZ"):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_touchstone(table, fmt, unit))


@dataclass(frozen=True, eq=False)
class InterpolatedTransmission:
    """tau(f) from a monotone cubic (PCHIP) fit of tabulated |S21|^2.

    Zero outside the tabulated grid. Immutable, so safe for concurrent reads.
    """

    table: SParameterTable

    def __post_init__(self):
        if len(self.table) < 2:
            raise ValueError("interpolation needs at least two frequency points")
        tau = np.abs(self.table.s21) ** 2
        object.__setattr__(self, "_tau", tau)
        object.__setattr__(self, "_interp", PchipInterpolator(self.table.frequencies, tau, extrapolate=False))
        object.__setattr__(self, "_ceiling", float(tau.max()))

    @property
    def breakpoints(self):
        return (float(self.table.frequencies[0]), float(self.table.frequencies[-1]))

    resonances = ()

    def __call__(self, f):
        f = np.asarray(f, dtype=np.float64)
        out = self._interp(f)
        out = np.where(np.isnan(out), 0.0, out)
        return np.clip(out, 0.0, self._ceiling)[()]


def interpolated_provider(table, r1=None, r2=None):
    """TransmissionProvider for ``table``.

    If port resistances are given they must equal the table's reference
    resistances; no renormalisation is attempted.
    """
    for port, want, have in ((1, r1, table.reference[0]), (2, r2, table.reference[1])):
        if want is not None and not math.isclose(want, have, rel_tol=1e-12):
            raise ReferenceImpedanceError(
                f"port {port} resistance {want} ohm differs from the table reference {have} ohm"
            )
    return InterpolatedTransmission(table)
