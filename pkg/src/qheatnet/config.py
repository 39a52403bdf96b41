"""Run configuration: loading, schema validation and unit conversion.

A config is YAML (or JSON, same schema) validated against
``schema/run_config.v1.json`` before anything is computed. Quantities may be
plain SI numbers or ``"<number> <unit>"`` strings; units are converted here
and nowhere else. Device keys use the published parameter names (``L_l``,
``C_l``, ``l``, ``l_1``, ``l_2``, ``C_r``, ``C_t``, ``C_s``, ``C_JJ``,
``I_C_sigma``, ``d``); omitted keys fall back to the published values.
"""

from dataclasses import dataclass, field, replace
from importlib import resources
import json
import os
from pathlib import Path
import re

import jsonschema
import numpy as np
import yaml

from .devices import DirectConnection, DoublePoleDevice, QhvDevice, QuarterWaveDevice, flux_grid_2d
from .errors import ConfigError, ParameterDomainError
from .josephson import JosephsonParams, TransmonSpec
from .network import ThermalPort
from .thermal import QuadratureOptions

SCHEMA_VERSION = 1

_PREFIX = {"": 1.0, "a": 1e-18, "f": 1e-15, "p": 1e-12, "n": 1e-9, "u": 1e-6, "µ": 1e-6,
           "m": 1e-3, "k": 1e3, "M": 1e6, "G": 1e9}


def _units(base, prefixes):
    return {p + base: _PREFIX[p] for p in prefixes}


UNITS = {
    "length": _units("m", ["", "m", "u", "µ", "n"]),
    "capacitance": _units("F", ["", "n", "p", "f", "a"]),
    "inductance_per_length": _units("H/m", ["", "u", "µ", "n", "p"]),
    "capacitance_per_length": _units("F/m", ["", "n", "p", "f"]),
    "current": _units("A", ["", "m", "u", "µ", "n"]),
    "frequency": _units("Hz", ["", "k", "M", "G"]),
    "temperature": _units("K", ["", "m"]),
    "resistance": {**_units("ohm", ["", "m", "k"]), **_units("Ω", ["", "m", "k"])},
    "power": _units("W", ["", "f", "a", "p", "n"]),
}
UNITS["resistance"].update({"Ohm": 1.0, "kOhm": 1e3})
UNITS["dimensionless"] = {"Phi0": 1.0, "Φ0": 1.0}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


def parse_quantity(value, kind, where=""):
    """SI value of ``value`` (number, or string with a unit of ``kind``)."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a quantity, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    m = _QUANTITY.match(str(value))
    if not m:
        raise ConfigError(f"{where}: cannot parse quantity {value!r}")
    number, unit = float(m.group(1)), m.group(2)
    if not unit:
        return number
    table = UNITS[kind]
    if unit not in table:
        raise ConfigError(f"{where}: unit {unit!r} is not a {kind.replace('_', ' ')} unit "
                          f"(accepted: {', '.join(sorted(table))})")
    scale = table[unit]
    # divide for sub-unit prefixes so "350 mK" gives exactly 0.35
    return number / round(1.0 / scale) if scale < 1 else number * scale


def load_schema():
    text = resources.files("qheatnet").joinpath("schema/run_config.v1.json").read_text("utf-8")
    return json.loads(text)


def load_raw(path):
    """Parse a YAML/JSON config file into a dict (no validation)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text) if path.suffix.lower() == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"{path}: not valid {'JSON' if path.suffix == '.json' else 'YAML'}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def validate(raw):
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for e in errors:
            loc = "/".join(str(p) for p in e.absolute_path) or "<root>"
            lines.append(f"{loc}: {e.message}")
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(lines))


@dataclass(frozen=True)
class TouchstoneSource:
    path: Path


@dataclass(frozen=True)
class SweepSpec:
    """kind is 'flux', 'resistance' or 'temperature'; points are SI values
    (or flux tuples for the double-pole device)."""

    kind: str
    points: list
    coord_names: tuple
    port: object = None  # resistance sweeps: 1, 2 or "both"


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str = None
    spectrum: bool = False


@dataclass(frozen=True)
class PortSpec:
    """Port as configured; ``resistance`` None means "use the table reference"."""

    resistance: float
    temperature: float

    def __post_init__(self):
        try:
            ThermalPort(self.resistance if self.resistance is not None else 1.0, self.temperature)
        except ParameterDomainError as exc:
            raise ConfigError(f"ports: {exc}") from exc


@dataclass(frozen=True)
class RunConfig:
    device: object
    flux: object
    ports: tuple
    sweep: SweepSpec = None
    quadrature: QuadratureOptions = field(default_factory=QuadratureOptions)
    frequencies: np.ndarray = None
    output: OutputSpec = field(default_factory=OutputSpec)
    raw: dict = field(default=None, repr=False, compare=False)

    def thermal_ports(self, reference=None):
        """ThermalPorts, filling unset resistances from ``reference`` (R1, R2)."""
        out = []
        for i, p in enumerate(self.ports):
            r = p.resistance
            if r is None:
                if reference is None:
                    raise ConfigError(f"ports: R{i + 1} is required for this device")
                r = reference[i]
            out.append(ThermalPort(r, p.temperature))
        return tuple(out)


def _q(section, key, kind, default, where):
    if key not in section:
        return default
    return parse_quantity(section[key], kind, f"{where}.{key}")


def _transmon(sec, where, suffix=""):
    cs = _q(sec, "C_s" + suffix, "capacitance", None, where)
    ic = _q(sec, "I_C_sigma" + suffix, "current", 72e-9, where)
    d = float(sec.get("d" + suffix, 0.08))
    return cs, ic, d


def _build_device(dev_sec, base_dir):
    (kind, sec), = dev_sec.items()
    where = f"device.{kind}"
    if kind == "direct":
        return DirectConnection(), ()
    if kind == "touchstone":
        path = Path(sec["path"])
        if not path.is_absolute():
            path = base_dir / path
        return TouchstoneSource(path), ()
    ll = _q(sec, "L_l", "inductance_per_length", 405e-9, where)
    cl = _q(sec, "C_l", "capacitance_per_length", 171e-12, where)
    cr = _q(sec, "C_r", "capacitance", None, where)
    if kind == "quarter_wave":
        d = QuarterWaveDevice.published()
        return QuarterWaveDevice(
            ll, cl,
            _q(sec, "l_1", "length", d.length_1, where),
            _q(sec, "l_2", "length", d.length_2, where),
            cr if cr is not None else d.coupling_capacitance,
        ), ()
    length = _q(sec, "l", "length", 5119e-6, where)
    cjj = _q(sec, "C_JJ", "capacitance", 0.0, where)
    csigma = _q(sec, "C_sigma", "capacitance", None, where)
    if kind == "qhv":
        ref = QhvDevice.published()
        cs, ic, d = _transmon(sec, where)
        t = TransmonSpec(JosephsonParams(ic, d), cs if cs is not None else ref.transmon.shunt_capacitance,
                         csigma, cjj)
        flux = sec.get("flux", 0.0)
        return QhvDevice(ll, cl, length, cr if cr is not None else ref.coupling_capacitance, t), flux
    if kind == "double_pole":
        ref = DoublePoleDevice.published()
        cs, ic, d = _transmon(sec, where)
        cs = cs if cs is not None else ref.transmon_a.shunt_capacitance
        ta = TransmonSpec(JosephsonParams(ic, d), cs, csigma, cjj)
        cs_b = _q(sec, "C_s_b", "capacitance", cs, where)
        ic_b = _q(sec, "I_C_sigma_b", "current", ic, where)
        d_b = float(sec.get("d_b", d))
        tb = TransmonSpec(JosephsonParams(ic_b, d_b), cs_b, csigma, cjj)
        ct = _q(sec, "C_t", "capacitance", ref.qubit_coupling_capacitance, where)
        flux = sec.get("flux", [0.0, 0.0])
        return DoublePoleDevice(ll, cl, length, cr if cr is not None else ref.coupling_capacitance,
                                ct, ta, tb), flux
    raise ConfigError(f"unknown device kind {kind!r}")  # pragma: no cover - schema guards


def expand_range(sec, kind, where):
    """Grid from {start, stop, num|step} or {values}."""
    if "values" in sec:
        return [parse_quantity(v, kind, f"{where}.values") for v in sec["values"]]
    start = parse_quantity(sec["start"], kind, f"{where}.start")
    stop = parse_quantity(sec["stop"], kind, f"{where}.stop")
    log = sec.get("spacing", "linear") == "log"
    if "num" in sec:
        n = int(sec["num"])
        if log:
            if start <= 0 or stop <= 0:
                raise ConfigError(f"{where}: log spacing needs positive bounds")
            return np.geomspace(start, stop, n).tolist()
        return np.linspace(start, stop, n).tolist()
    if log:
        raise ConfigError(f"{where}: log spacing needs 'num', not 'step'")
    step = parse_quantity(sec["step"], kind, f"{where}.step")
    if step == 0 or (stop - start) / step < 0:
        raise ConfigError(f"{where}: step {step} does not move from {start} towards {stop}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return (start + step * np.arange(n)).tolist()


def _build_sweep(sec, device):
    if sec is None:
        return None
    kinds = [k for k in ("flux", "resistance", "temperatures") if k in sec]
    if len(kinds) != 1:
        raise ConfigError("sweep: give exactly one of 'flux', 'resistance', 'temperatures'")
    if "resistance_port" in sec and "resistance" not in sec:
        raise ConfigError("sweep.resistance_port requires sweep.resistance")
    if "flux2" in sec and "flux" not in sec:
        raise ConfigError("sweep.flux2 requires sweep.flux")
    kind = kinds[0]
    if kind == "flux":
        arity = getattr(device, "flux_arity", 0)
        if arity == 0:
            raise ConfigError("sweep.flux: this device has no flux bias")
        phis = expand_range(sec["flux"], "dimensionless", "sweep.flux")
        if arity == 1:
            if "flux2" in sec:
                raise ConfigError("sweep.flux2 only applies to the double_pole device")
            return SweepSpec("flux", phis, ("flux_phi0",))
        if "flux2" in sec:
            phis2 = expand_range(sec["flux2"], "dimensionless", "sweep.flux2")
            points = flux_grid_2d(phis, phis2)
        else:
            points = [(p, p) for p in phis]  # global bias: both qubits see the same flux
        return SweepSpec("flux", points, ("flux_phi0", "flux2_phi0"))
    if kind == "resistance":
        port = sec.get("resistance_port", "both")
        key = "R_ohm" if port == "both" else f"R{port}_ohm"
        return SweepSpec("resistance", expand_range(sec["resistance"], "resistance", "sweep.resistance"),
                         (key,), port)
    temps = [parse_quantity(t, "temperature", "sweep.temperatures") for t in sec["temperatures"]]
    return SweepSpec("temperature", temps, ("T1_K",))


def _build_ports(sec, default_r):
    return tuple(
        PortSpec(_q(sec, f"R{i}", "resistance", default_r, "ports"),
                 _q(sec, f"T{i}", "temperature", None, "ports"))
        for i in (1, 2)
    )


def build_run_config(raw, base_dir="."):
    """Validate ``raw`` and convert it to a :class:`RunConfig` (SI units)."""
    validate(raw)
    base_dir = Path(base_dir)
    try:
        device, flux = _build_device(raw["device"], base_dir)
    except ParameterDomainError as exc:
        raise ConfigError(f"device: {exc}") from exc
    default_r = None if isinstance(device, TouchstoneSource) else 50.0
    ports = _build_ports(raw["ports"], default_r)
    q = raw.get("quadrature", {})
    quad = QuadratureOptions(
        rel_tol=float(q.get("rel_tol", 1e-8)),
        abs_tol=_q(q, "abs_tol", "power", 1e-22, "quadrature"),
        f_max=_q(q, "f_max", "frequency", None, "quadrature"),
        max_evaluations=int(q.get("max_evaluations", 200_000)),
    )
    freqs = None
    if "frequency" in raw:
        freqs = np.asarray(expand_range(raw["frequency"], "frequency", "frequency"))
        if np.any(freqs <= 0):
            raise ConfigError("frequency: all frequencies must be > 0")
    out = raw.get("output", {})
    output = OutputSpec(out.get("format", "csv"), out.get("path"), bool(out.get("spectrum", False)))
    return RunConfig(device, flux, ports, _build_sweep(raw.get("sweep"), device), quad, freqs, output, raw)


def load_config(path):
    """Read, validate and convert a config file."""
    path = Path(path)
    return build_run_config(load_raw(path), base_dir=path.parent)


def with_output(cfg, fmt=None, path=None):
    out = cfg.output
    return replace(cfg, output=replace(out, format=fmt or out.format, path=path or out.path))


__all__ = [
    "PortSpec",
    "RunConfig",
    "SweepSpec",
    "TouchstoneSource",
    "build_run_config",
    "expand_range",
    "load_config",
    "load_raw",
    "parse_quantity",
    "validate",
]
