"""Acceptance suite: one test per criterion, each with its runtime budget.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the terminal summary.
"""

import math
from pathlib import Path
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import integrate

from qheatnet.analysis import (
    branch_frequency,
    count_avoided_crossings,
    local_maxima_2d,
    modulation_ratio,
)
from qheatnet.config import load_config
from qheatnet.constants import H, K_B
from qheatnet.devices import sparameters, sweep_flux, sweep_resistance
from qheatnet.network import (
    SeriesImpedance,
    ShuntAdmittance,
    TransmissionLine,
    TwoPortABCD,
    abcd_to_s21,
    abcd_to_transfer_function,
    cascade_elements,
    direct_connection_tau,
    tau_parallel,
    tau_series,
    transmission_probability,
)
from qheatnet.thermal import (
    ConstantTransmission,
    LorentzianTransmission,
    net_heat_flow,
    net_power_spectral_density,
)

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.criterion(1, "direct-connection transmission")
def test_direct_connection_transmission(report):
    rng = np.random.default_rng(2024)
    r1 = 10.0 ** rng.uniform(-2, 4, 1000)
    r2 = 10.0 ** rng.uniform(-2, 4, 1000)
    with Timer() as t:
        ident = TwoPortABCD.identity()
        tau = np.array([abs(abcd_to_s21(ident, a, b)) ** 2 for a, b in zip(r1, r2)])
    oracle = 4 * r1 * r2 / (r1 + r2) ** 2
    worst = float(np.max(np.abs(tau - oracle) / oracle))
    report(f"max rel err {worst:.1e}, {t.elapsed:.3f} s")
    assert worst < 1e-12
    np.testing.assert_allclose(direct_connection_tau(r1, r2), oracle, rtol=1e-15)
    assert t.elapsed < 1.0


def _bruteforce_prefactor():
    # integral of x (1/(e^x - 1)) dx over (0, inf) = pi^2 / 6
    def bose(x):
        return x * math.exp(-x) / -math.expm1(-x) if x > 0 else 1.0

    val, _ = integrate.quad(bose, 0, np.inf, epsabs=0, epsrel=1e-13)
    return val * K_B**2 / H


@pytest.mark.criterion(2, "quantum-limited heat flow")
def test_quantum_limited_heat_flow(report):
    prefactor = _bruteforce_prefactor()
    assert prefactor == pytest.approx(math.pi**2 * K_B**2 / (6 * H), rel=1e-12)
    rng = np.random.default_rng(7)
    pairs = rng.uniform(0.05, 0.5, size=(20, 2))
    with Timer() as t:
        got = np.array([net_heat_flow(ConstantTransmission(1.0), a, b).net_power for a, b in pairs])
    oracle = prefactor * (pairs[:, 0] ** 2 - pairs[:, 1] ** 2)
    worst = float(np.max(np.abs(got - oracle) / np.abs(oracle)))
    report(f"max rel err {worst:.1e}, {t.elapsed:.2f} s")
    assert worst < 1e-6
    assert t.elapsed < 5.0


@pytest.mark.criterion(3, "closed-form series/parallel transmission and transfer function")
def test_series_parallel_equivalences(report):
    rng = np.random.default_rng(11)
    f = np.array([1e9])
    worst_series = worst_parallel = worst_h = 0.0
    with Timer() as t:
        for _ in range(100):
            r1, r2 = 10.0 ** rng.uniform(-1, 3, 2)
            zb = complex(10.0 ** rng.uniform(-1, 3), rng.normal(0, 200))
            m = cascade_elements([SeriesImpedance(zb)], f)
            ref = transmission_probability(m, r1, r2)[0]
            worst_series = max(worst_series, abs(tau_series(zb, r1, r2) - ref) / ref)
            m = cascade_elements([ShuntAdmittance(1 / zb)], f)
            ref = transmission_probability(m, r1, r2)[0]
            worst_parallel = max(worst_parallel, abs(tau_parallel(zb, r1, r2) - ref) / ref)
            # general network: line, shunt, series
            line = TransmissionLine(rng.uniform(1e-3, 1e-2), 405e-9, 171e-12)
            net = [SeriesImpedance(zb), line, ShuntAdmittance(1j * rng.normal(0, 0.05))]
            m = cascade_elements(net, np.array([rng.uniform(1e9, 1e10)]))
            s21 = abcd_to_s21(m, r1, r2)[0]
            h = abcd_to_transfer_function(m, r1, r2)[0]
            worst_h = max(worst_h, abs(h - 0.5 * math.sqrt(r2 / r1) * s21) / abs(h))
    report(f"series {worst_series:.1e}, parallel {worst_parallel:.1e}, H {worst_h:.1e}, {t.elapsed:.3f} s")
    assert worst_series < 1e-9 and worst_parallel < 1e-9
    assert worst_h < 1e-14
    assert t.elapsed < 1.0


@pytest.mark.criterion(4, "quarter-wave resonator")
def test_quarter_wave_resonator(report):
    with Timer() as t:
        cfg = load_config(CONFIGS / "quarter_wave_sparams.yaml")
        (p1, p2) = cfg.thermal_ports()
        s21, _ = sparameters(cfg.device, None, cfg.frequencies, p1.resistance, p2.resistance)
        f_peak = cfg.frequencies[int(np.argmax(np.abs(s21)))]
        rcfg = load_config(CONFIGS / "quarter_wave_resistance.yaml")
        pts = sweep_resistance(rcfg.device, rcfg.sweep.points, rcfg.thermal_ports(), opts=rcfg.quadrature,
                               port=rcfg.sweep.port)
    r = np.array(rcfg.sweep.points)
    p = np.array([pt.net_power for pt in pts])
    i = int(np.argmax(p))
    diffs = np.sign(np.diff(p))
    report(f"f_peak {f_peak / 1e9:.3f} GHz, P max {p[i] * 1e15:.2f} fW at R = {r[i]:.1f} ohm, {t.elapsed:.1f} s")
    assert abs(f_peak - 6e9) / 6e9 < 0.1
    assert all(pt.ok for pt in pts)
    assert r[0] == 1.0 and r[-1] == pytest.approx(500.0)
    assert 0 < i < len(p) - 1
    # single interior maximum: rises then falls
    assert np.all(diffs[:i] > 0) and np.all(diffs[i:] < 0)
    assert t.elapsed < 30.0


@pytest.mark.criterion(5, "flux-modulated heat valve")
def test_heat_valve_flux_sweep(report):
    cfg = load_config(CONFIGS / "qhv_flux_sweep.yaml")
    flux = np.array(cfg.sweep.points)
    assert flux.size == 201
    ports = cfg.thermal_ports()
    with Timer() as t:
        p = np.array([pt.net_power for pt in sweep_flux(cfg.device, flux, ports, cfg.quadrature)])
        shifted = np.array([pt.net_power for pt in sweep_flux(cfg.device, flux + 1.0, ports, cfg.quadrature)])
    delta = p.max() - p.min()
    ratio = modulation_ratio(p)
    even = float(np.max(np.abs(p - p[::-1]) / p.max()))
    periodic = float(np.max(np.abs(p - shifted) / p.max()))
    report(f"dP {delta * 1e15:.3f} fW, modulation {ratio:.3f}, even {even:.0e}, "
           f"periodic {periodic:.0e}, {t.elapsed:.1f} s")
    assert np.all(np.isfinite(p))
    assert 0.29e-15 / 2 <= delta <= 0.29e-15 * 2
    assert ratio >= 0.9
    assert even <= 1e-9 and periodic <= 1e-9
    assert t.elapsed < 120.0


@pytest.mark.criterion(6, "heat-valve spectroscopy")
def test_heat_valve_spectroscopy(report):
    cfg = load_config(CONFIGS / "qhv_spectroscopy.yaml")
    (p1, p2) = cfg.thermal_ports()
    flux = np.array(cfg.sweep.points)
    f = cfg.frequencies
    assert flux[0] == 0.0 and flux[-1] == 1.0
    with Timer() as t:
        mag = np.array([np.abs(sparameters(cfg.device, phi, f, p1.resistance, p2.resistance)[0]) for phi in flux])
        branch = branch_frequency(f, mag, 5.6e9)
        n, _ = count_avoided_crossings(flux, f, mag, branch, guard=0.05e9)
    report(f"{n} avoided crossings, branch {branch / 1e9:.2f} GHz, {t.elapsed:.1f} s")
    assert n == 2
    assert abs(branch - 5.6e9) / 5.6e9 < 0.1
    assert t.elapsed < 120.0


@pytest.mark.criterion(7, "double-pole flux map")
def test_double_pole_map(report):
    cfg = load_config(CONFIGS / "double_pole_map.yaml")
    axis = np.linspace(-1.0, 1.0, 41)
    assert len(cfg.sweep.points) == 41 * 41
    with Timer() as t:
        pts = sweep_flux(cfg.device, cfg.sweep.points, cfg.thermal_ports(), cfg.quadrature)
    grid = np.array([pt.net_power for pt in pts]).reshape(41, 41)
    assert np.all(np.isfinite(grid))
    rel_tol = cfg.quadrature.rel_tol

    # exchange symmetry to quadrature tolerance
    asym = float(np.max(np.abs(grid - grid.T) / grid.max()))

    # maxima inside one period; the map is periodic, so drop the duplicated +1 edge
    peaks = local_maxima_2d(grid[:-1, :-1], threshold=0.5, periodic=True)
    inside = [(float(axis[i]), float(axis[j])) for i, j in peaks if abs(axis[i]) < 0.5 and abs(axis[j]) < 0.5]
    near = [abs(abs(a) - 0.4) <= 0.1 and abs(abs(b) - 0.4) <= 0.1 for a, b in inside]
    quadrants = {(np.sign(a), np.sign(b)) for a, b in inside}

    # parking either qubit at half flux suppresses the whole row/column
    half = [int(np.argmin(np.abs(axis - v))) for v in (-0.5, 0.5)]
    suppressed = max(grid[half, :].max(), grid[:, half].max()) / grid.max()
    report(f"maxima {[(round(a, 2), round(b, 2)) for a, b in inside]}, exchange asym {asym:.0e}, "
           f"half-flux max/global max {suppressed:.3f}, {t.elapsed:.1f} s")
    assert len(inside) == 4 and all(near) and len(quadrants) == 4
    assert asym <= 10 * rel_tol
    assert suppressed < 0.25
    assert t.elapsed < 600.0


@pytest.mark.criterion(8, "property suites and quadrature oracle")
def test_property_suites_and_quadrature_oracle(report):
    tau = LorentzianTransmission(5.6e9, 0.4e9, 0.9)
    res = net_heat_flow(tau, 0.35, 0.12)
    f = np.linspace(0.0, res.f_max, 1_000_001)
    oracle = np.trapezoid(net_power_spectral_density(tau, 0.35, 0.12, f), f)
    rel = abs(res.net_power - oracle) / oracle
    suites = ["tests/test_network.py", "tests/test_thermal.py", "tests/test_touchstone.py"]
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *suites],
                          cwd=ROOT, capture_output=True, text=True)
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    report(f"trapezoid rel err {rel:.1e}, suites: {tail}")
    assert rel < 1e-6
    assert proc.returncode == 0, proc.stdout[-3000:]
