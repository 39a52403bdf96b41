"""Command-line front end.

    qheatnet heat    --config run.yaml
    qheatnet sweep   --config sweep.yaml --output sweep.csv
    qheatnet sparams --config s.yaml --format json
    qheatnet from-touchstone device.s2p --T1 "350 mK" --T2 "120 mK"

Exit codes: 0 success, 2 configuration/input/output problem, 3 numerical
failure. Tables go to ``--output`` (or ``output.path``), else to stdout; in
the stdout case the human-readable summary goes to stderr.
"""

import argparse
import logging
import sys
import warnings

import numpy as np

from . import __version__
from .analysis import modulation_ratio
from .config import TouchstoneSource, build_run_config, load_config, load_raw, with_output
from .devices import (
    device_transmission,
    resolve_threads,
    sparameters,
    sweep_flux,
    sweep_resistance,
    sweep_temperature,
)
from .errors import ConfigError, NumericalError, QHeatNetError
from .export import export_results, export_sparameters, export_spectrum, sparameter_rows
from .thermal import net_heat_flow
from .touchstone import interpolated_provider, read_touchstone

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("qheatnet")


def _provider(cfg):
    """(TransmissionProvider, ThermalPorts, table-or-None) for a config."""
    if isinstance(cfg.device, TouchstoneSource):
        try:
            table = read_touchstone(cfg.device.path)
        except OSError as exc:
            raise ConfigError(f"cannot read {cfg.device.path}: {exc.strerror or exc}") from exc
        ports = cfg.thermal_ports(table.reference)
        tau = interpolated_provider(table, ports[0].resistance, ports[1].resistance)
        return tau, ports, table
    ports = cfg.thermal_ports()
    r1, r2 = ports[0].require_resistive(), ports[1].require_resistive()
    return device_transmission(cfg.device, cfg.flux, r1, r2), ports, None


def _dest(cfg):
    return cfg.output.path if cfg.output.path else sys.stdout


def _summary_stream(cfg):
    return sys.stdout if cfg.output.path else sys.stderr


def cmd_heat(cfg, threads=None):
    if cfg.sweep is not None:
        raise ConfigError("'heat' takes a config without a sweep section (use 'sweep')")
    if cfg.output.spectrum and not cfg.output.path:
        raise ConfigError("output.spectrum needs output.path or --output")
    tau, ports, _ = _provider(cfg)
    res = net_heat_flow(tau, ports[0].temperature, ports[1].temperature, cfg.quadrature)
    print(f"P_net_W = {res.net_power:.12e}")
    print(f"P_net_fW = {res.net_power_fW:.9g}")
    print(f"err_W = {res.error_estimate:.3e}")
    print(f"f_max_Hz = {res.f_max:.6e}")
    print(f"evaluations = {res.evaluations}")
    if cfg.output.path:
        export_spectrum(res, cfg.output.format, cfg.output.path)
        log.info("spectrum written to %s", cfg.output.path)
    return EXIT_OK


def run_sweep(cfg, threads=None):
    """Sweep points for ``cfg`` (library-level; the CLI only formats them)."""
    sw = cfg.sweep
    if sw is None:
        raise ConfigError("'sweep' needs a sweep section")
    tau, ports, table = _provider(cfg)
    if sw.kind == "flux":
        return sweep_flux(cfg.device, sw.points, ports, cfg.quadrature, threads)
    if sw.kind == "resistance":
        if table is not None:
            raise ConfigError("resistance sweeps need a circuit device; a table has a fixed reference")
        return sweep_resistance(cfg.device, sw.points, ports, cfg.flux, cfg.quadrature, threads, sw.port)
    return sweep_temperature(cfg.device, sw.points, ports, cfg.flux, cfg.quadrature, threads, tau=tau)


def _summarize(points, stream):
    powers = np.array([p.net_power for p in points])
    failed = sum(not p.ok for p in points)
    finite = powers[np.isfinite(powers)]
    print(f"points = {len(points)}", file=stream)
    print(f"failed = {failed}", file=stream)
    if finite.size:
        print(f"P_max_W = {finite.max():.12e}", file=stream)
        print(f"P_min_W = {finite.min():.12e}", file=stream)
        print(f"modulation_ratio = {modulation_ratio(finite):.9f}", file=stream)
    for p in points:
        if not p.ok:
            log.warning("point %s failed: %s", p.coords, p.error)


def cmd_sweep(cfg, threads=None):
    points = run_sweep(cfg, threads)
    export_results(points, cfg.output.format, _dest(cfg), cfg.sweep.coord_names,
                   include_spectrum=cfg.output.spectrum)
    _summarize(points, _summary_stream(cfg))
    if points and all(not p.ok for p in points):
        return EXIT_NUMERICAL
    return EXIT_OK


def sparameter_table(cfg):
    """(rows, flux column names) for the S-parameter output of ``cfg``."""
    if isinstance(cfg.device, TouchstoneSource):
        _, _, table = _provider(cfg)
        keep = np.ones(len(table), dtype=bool)
        if cfg.frequencies is not None:
            keep = (table.frequencies >= cfg.frequencies.min()) & (table.frequencies <= cfg.frequencies.max())
        return sparameter_rows(table.frequencies[keep], table.s21[keep], table.s11[keep]), ()
    if cfg.frequencies is None:
        raise ConfigError("'sparams' needs a frequency section")
    ports = cfg.thermal_ports()
    r1, r2 = ports[0].resistance, ports[1].resistance
    f = cfg.frequencies
    if cfg.sweep is None:
        s21, s11 = sparameters(cfg.device, cfg.flux, f, r1, r2)
        return sparameter_rows(f, s21, s11), ()
    if cfg.sweep.kind != "flux":
        raise ConfigError("'sparams' supports flux sweeps only")
    rows = []
    for phi in cfg.sweep.points:
        s21, s11 = sparameters(cfg.device, phi, f, r1, r2)
        rows.extend(sparameter_rows(f, s21, s11, flux=np.atleast_1d(phi).tolist()))
    return rows, cfg.sweep.coord_names


def cmd_sparams(cfg, threads=None):
    rows, names = sparameter_table(cfg)
    export_sparameters(rows, cfg.output.format, _dest(cfg), names)
    print(f"rows = {len(rows)}", file=_summary_stream(cfg))
    return EXIT_OK


def _touchstone_config(args):
    """RunConfig for ``from-touchstone``: file from the command line, the rest
    from --config and/or the port options."""
    raw = load_raw(args.config) if args.config else {"version": 1, "ports": {}}
    raw = dict(raw)
    raw["device"] = {"touchstone": {"path": str(args.file)}}
    ports = dict(raw.get("ports", {}))
    for key in ("R1", "T1", "R2", "T2"):
        value = getattr(args, key)
        if value is not None:
            ports[key] = value
    raw["ports"] = ports
    return build_run_config(raw, base_dir=".")


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="output file (default: output.path, else stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default: output.format)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for sweeps (default: $QHEATNET_THREADS or 1)")
    common.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="qheatnet", description="Photonic heat transport through linear circuits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("heat", "net heat flow for one operating point"),
        ("sweep", "heat flow over a flux, resistance or temperature sweep"),
        ("sparams", "S21/S11 table (optionally over a flux sweep)"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--config", "-c", required=True, help="YAML or JSON run configuration")
    p = sub.add_parser("from-touchstone", parents=[common], help="heat flow through a Touchstone v1 table")
    p.add_argument("file", help="two-port .s2p file")
    p.add_argument("--config", "-c", help="config supplying ports/quadrature/output (device is ignored)")
    for key, what, example in (("T1", "temperature", "350 mK"), ("T2", "temperature", "120 mK"),
                               ("R1", "resistance", "50 ohm"), ("R2", "resistance", "50 ohm")):
        p.add_argument(f"--{key}", help=f"port {key[1]} {what}, e.g. '{example}'")
    return parser


COMMANDS = {"heat": cmd_heat, "sweep": cmd_sweep, "sparams": cmd_sparams}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if not args.verbose:
        warnings.simplefilter("default")
    try:
        threads = resolve_threads(args.threads)
        if args.command == "from-touchstone":
            cfg = _touchstone_config(args)
            handler = cmd_sweep if cfg.sweep is not None else cmd_heat
        else:
            cfg = load_config(args.config)
            handler = COMMANDS[args.command]
        cfg = with_output(cfg, args.format, args.output)
        return handler(cfg, threads)
    except NumericalError as exc:
        print(f"qheatnet: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (QHeatNetError, ValueError, OSError) as exc:
        print(f"qheatnet: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
