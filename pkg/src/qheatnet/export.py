"""CSV/JSON writers for heat-flow sweeps and S-parameter tables.

Sweep CSV columns are the sweep coordinates (``flux_phi0[, flux2_phi0]``
for flux sweeps) followed by ``P_net_W, err_W, f_max_Hz``. If any point
failed, a trailing ``error`` column carries the message for that row.
Files are UTF-8 with LF line endings.
"""

import csv
import io
import json
import os

import numpy as np

from .devices import SweepPoint
from .errors import ExportError
from .thermal import HeatResult

RESULT_COLUMNS = ("P_net_W", "err_W", "f_max_Hz")
JSON_KIND = "qheatnet-heat-results"
JSON_VERSION = 1


def _coord_names(points, default):
    if points:
        return tuple(points[0].coords)
    return tuple(default)


def _fmt(x):
    return repr(float(x))


def sweep_csv(points, coord_names=("flux_phi0",)):
    names = _coord_names(points, coord_names)
    any_failed = any(not p.ok for p in points)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(names) + list(RESULT_COLUMNS) + (["error"] if any_failed else []))
    for p in points:
        r = p.result
        row = [_fmt(p.coords[k]) for k in names]
        if r is not None and p.ok:
            row += [_fmt(r.net_power), _fmt(r.error_estimate), _fmt(r.f_max)]
        else:
            row += ["nan", "nan", _fmt(r.f_max) if r is not None else "nan"]
        if any_failed:
            row.append(p.error or "")
        writer.writerow(row)
    return buf.getvalue()


def result_record(result, include_spectrum=True):
    rec = {
        "P_net_W": result.net_power,
        "err_W": result.error_estimate,
        "f_max_Hz": result.f_max,
        "evaluations": int(result.evaluations),
        "converged": bool(result.converged),
    }
    if include_spectrum:
        rec["spectrum"] = {
            "f_Hz": result.frequencies.tolist(),
            "S_Pnet_W_per_Hz": result.spectrum.tolist(),
        }
    return rec


def sweep_json(points, include_spectrum=True):
    records = []
    for p in points:
        rec = dict(p.coords)
        rec.update(result_record(p.result, include_spectrum) if p.result is not None else {})
        rec["error"] = p.error
        records.append(rec)
    doc = {"kind": JSON_KIND, "version": JSON_VERSION, "points": records}
    return json.dumps(doc, indent=1, allow_nan=True) + "\n"


def _record_to_point(rec):
    rec = dict(rec)
    error = rec.pop("error", None)
    if "P_net_W" in rec:
        spec = rec.pop("spectrum", None) or {"f_Hz": [], "S_Pnet_W_per_Hz": []}
        result = HeatResult(
            net_power=rec.pop("P_net_W"),
            error_estimate=rec.pop("err_W"),
            f_max=rec.pop("f_max_Hz"),
            evaluations=rec.pop("evaluations"),
            frequencies=np.asarray(spec["f_Hz"], dtype=np.float64),
            spectrum=np.asarray(spec["S_Pnet_W_per_Hz"], dtype=np.float64),
            converged=rec.pop("converged", True),
        )
    else:
        result = None
    return SweepPoint(coords=rec, result=result, error=error)


def parse_json_results(text):
    doc = json.loads(text)
    if doc.get("kind") != JSON_KIND:
        raise ValueError("not a qheatnet results document")
    return [_record_to_point(r) for r in doc["points"]]


def _write_text(text, destination):
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = os.fspath(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc


def export_results(results, fmt, destination, coord_names=("flux_phi0",), include_spectrum=True):
    """Write sweep points (or bare HeatResults) as ``csv`` or ``json``."""
    points = [r if isinstance(r, SweepPoint) else SweepPoint({}, r) for r in results]
    if fmt == "csv":
        text = sweep_csv(points, coord_names)
    elif fmt == "json":
        text = sweep_json(points, include_spectrum)
    else:
        raise ValueError(f"unknown format {fmt!r}; use 'csv' or 'json'")
    _write_text(text, destination)


def read_results(source):
    """Read a JSON results file back into SweepPoints."""
    if hasattr(source, "read"):
        return parse_json_results(source.read())
    path = os.fspath(source)
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_json_results(fh.read())
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror or exc}") from exc


def spectrum_csv(result):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["f_Hz", "S_Pnet_W_per_Hz"])
    for f, s in zip(result.frequencies, result.spectrum):
        writer.writerow([_fmt(f), _fmt(s)])
    return buf.getvalue()


def export_spectrum(result, fmt, destination):
    """Write a single heat-flow result with its spectrum."""
    if fmt == "csv":
        text = spectrum_csv(result)
    elif fmt == "json":
        text = sweep_json([SweepPoint({}, result)], include_spectrum=True)
    else:
        raise ValueError(f"unknown format {fmt!r}; use 'csv' or 'json'")
    _write_text(text, destination)


SPARAM_COLUMNS = ("f_Hz", "S21_mag", "S21_arg_rad", "S11_mag")


def sparameter_rows(f, s21, s11, flux=None):
    """Rows for the plot table; ``flux`` (tuple) adds leading flux columns."""
    lead = [] if flux is None else [float(x) for x in flux]
    s21 = np.asarray(s21)
    cols = np.column_stack([np.asarray(f, dtype=np.float64), np.abs(s21), np.angle(s21), np.abs(np.asarray(s11))])
    return [lead + row for row in cols.tolist()]


def export_sparameters(rows, fmt, destination, flux_names=()):
    header = list(flux_names) + list(SPARAM_COLUMNS)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for r in rows:
            writer.writerow([_fmt(x) for x in r])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps({"columns": header, "rows": rows}) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}; use 'csv' or 'json'")
    _write_text(text, destination)
