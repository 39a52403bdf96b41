import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qheatnet.analysis import (
    branch_frequency,
    count_avoided_crossings,
    fit_quality_factor,
    modulation_ratio,
    peak_frequencies,
)
from qheatnet.constants import E_CHARGE, H, PHI_0
from qheatnet.devices import (
    DirectConnection,
    DoublePoleDevice,
    QhvDevice,
    QuarterWaveDevice,
    build_network,
    device_transmission,
    flux_grid_2d,
    resolve_threads,
    sparameters,
    sweep_flux,
    sweep_resistance,
    sweep_temperature,
)
from qheatnet.errors import DescriptorError, ParameterDomainError, SingularInductanceError
from qheatnet.josephson import (
    JosephsonParams,
    TransmonSpec,
    charging_energy,
    josephson_energy,
    josephson_inductance,
    lc_frequency,
    shunt_admittance,
    transmon_frequency,
)
from qheatnet.network import (
    SeriesCapacitor,
    ThermalPort,
    TransmissionLine,
    TransmonShunt,
    abcd_to_s21,
    cascade,
    cascade_elements,
    transmission_probability,
)
from qheatnet.thermal import QuadratureOptions, net_heat_flow

IC = 72e-9


# -- Josephson / transmon -------------------------------------------------------


def test_inductance_at_zero_phase():
    lj = josephson_inductance(JosephsonParams(IC))
    assert lj == pytest.approx(PHI_0 / (2 * math.pi * IC), rel=1e-15)
    assert lj == pytest.approx(4.571e-9, rel=2e-4)


def test_inductance_at_half_flux_with_asymmetry():
    lj0 = josephson_inductance(JosephsonParams(IC, 0.08))
    lj = josephson_inductance(JosephsonParams(IC, 0.08, math.pi / 2))
    assert lj == pytest.approx(lj0 / 0.08, rel=1e-12)
    assert lj == pytest.approx(57.1e-9, rel=1e-3)


def test_inductance_matches_tan_form_off_the_pole():
    d, delta = 0.3, 1.1
    expected = PHI_0 / (2 * math.pi * IC * abs(math.cos(delta)) * math.sqrt(1 + d**2 * math.tan(delta) ** 2))
    assert josephson_inductance(JosephsonParams(IC, d, delta)) == pytest.approx(expected, rel=1e-13)


def test_inductance_diverges_symmetric_squid():
    with pytest.raises(SingularInductanceError):
        josephson_inductance(JosephsonParams(IC, 0.0, math.pi / 2))
    with pytest.raises(SingularInductanceError):
        josephson_inductance(JosephsonParams(IC).at_flux(1.5))


@pytest.mark.parametrize("kw", [dict(critical_current=0.0), dict(critical_current=IC, asymmetry=1.0),
                                dict(critical_current=IC, asymmetry=-0.1)])
def test_josephson_params_validation(kw):
    with pytest.raises(ParameterDomainError):
        JosephsonParams(**kw)


def test_flux_to_phase():
    p = JosephsonParams(IC).at_flux(0.25)
    assert p.phase == pytest.approx(math.pi / 4)
    assert p.flux == pytest.approx(0.25)


def test_josephson_energy_examples():
    ej0 = josephson_energy(JosephsonParams(IC, 0.08))
    assert ej0 / H == pytest.approx(35.8e9, rel=2e-3)
    assert josephson_energy(JosephsonParams(IC, 0.08, math.pi / 2)) == pytest.approx(0.08 * ej0, rel=1e-12)
    half = josephson_energy(JosephsonParams(IC, 0.0, math.pi / 3))
    assert half == pytest.approx(josephson_energy(JosephsonParams(IC)) / 2, rel=1e-12)


def test_charging_energy_and_frequency():
    assert charging_energy(96e-15) == pytest.approx(E_CHARGE**2 / (2 * 96e-15), rel=1e-15)
    assert charging_energy(96e-15) / H == pytest.approx(202e6, rel=2e-3)
    t = TransmonSpec(JosephsonParams(IC, 0.08), 96e-15)
    assert t.charging_energy == charging_energy(96e-15)
    fq = transmon_frequency(t)
    assert fq == pytest.approx(math.sqrt(8 * 35.8e9 * 0.202e9), rel=5e-3)
    assert fq == pytest.approx(7.6e9, rel=1e-2)
    quad = TransmonSpec(JosephsonParams(4 * IC, 0.08), 96e-15)
    assert transmon_frequency(quad) == pytest.approx(2 * fq, rel=1e-13)


def test_lc_frequency_equals_transmon_frequency_when_island_is_shunt():
    t = TransmonSpec(JosephsonParams(IC, 0.08), 96e-15)
    # differ only through the rounded Phi_0 vs h/2e
    assert lc_frequency(t) == pytest.approx(transmon_frequency(t), rel=1e-9)


def test_transmon_spec_validation_and_defaults():
    with pytest.raises(ParameterDomainError):
        TransmonSpec(JosephsonParams(IC), 0.0)
    with pytest.raises(ParameterDomainError):
        TransmonSpec(JosephsonParams(IC), 96e-15, junction_capacitance=-1e-15)
    t = TransmonSpec(JosephsonParams(IC), 96e-15, junction_capacitance=10e-15)
    assert t.total_shunt_capacitance == pytest.approx(106e-15)


def test_shunt_admittance_formula():
    t = TransmonSpec(JosephsonParams(IC, 0.08, 0.3), 96e-15, junction_capacitance=5e-15)
    f = np.array([1e9, 5e9])
    w = 2 * np.pi * f
    lj = josephson_inductance(t.josephson)
    zc = 1 / (1j * w * 101e-15)
    zj = 1j * w * lj
    np.testing.assert_allclose(shunt_admittance(t, f), (zc + zj) / (zc * zj), rtol=1e-13)
    with pytest.raises(ParameterDomainError):
        shunt_admittance(t, 0.0)


# -- builders -------------------------------------------------------------------


def test_published_parameter_sets():
    qw = QuarterWaveDevice.published()
    assert (qw.length_1, qw.length_2, qw.coupling_capacitance) == (4723e-6, 580e-6, 23e-15)
    qhv = QhvDevice.published()
    assert qhv.length == 5119e-6 and qhv.coupling_capacitance == 10e-15
    assert qhv.transmon.shunt_capacitance == 96e-15 and qhv.transmon.josephson.asymmetry == 0.08
    dp = DoublePoleDevice.published()
    assert dp.qubit_coupling_capacitance == 20e-15 and dp.transmon_a.shunt_capacitance == 61e-15


def test_arity_checks():
    with pytest.raises(DescriptorError):
        QuarterWaveDevice.published().elements(0.1)
    with pytest.raises(DescriptorError):
        QhvDevice.published().elements(None)
    with pytest.raises(DescriptorError):
        QhvDevice.published().elements((0.1, 0.2))
    with pytest.raises(DescriptorError):
        DoublePoleDevice.published().elements(0.1)
    assert DirectConnection().elements() == []


def test_qhv_singular_at_half_flux_without_asymmetry():
    dev = QhvDevice.published(asymmetry=0.0)
    with pytest.raises(SingularInductanceError):
        build_network(dev, 0.5, np.array([5e9]))


def test_qhv_cascade_order():
    dev = QhvDevice.published()
    f = np.linspace(4e9, 7e9, 5)
    line = TransmissionLine(405e-9, 171e-12, 5119e-6)
    q = TransmonShunt(dev.transmon.at_flux(0.2))
    manual = cascade([line.abcd(f), SeriesCapacitor(10e-15).abcd(f), q.abcd(f),
                      SeriesCapacitor(10e-15).abcd(f), line.abcd(f)])
    np.testing.assert_allclose(build_network(dev, 0.2, f).matrix, manual.matrix, rtol=1e-13)


def test_direct_device_transmission():
    f = np.linspace(1e9, 9e9, 7)
    s21, s11 = sparameters(DirectConnection(), None, f, 10.0, 40.0)
    np.testing.assert_allclose(np.abs(s21), 2 * math.sqrt(400) / 50, rtol=1e-15)
    np.testing.assert_allclose(np.abs(s11), 0.6, rtol=1e-14)


def test_quarter_wave_peak_near_six_ghz():
    f = np.linspace(4e9, 8e9, 4001)
    s21, _ = sparameters(QuarterWaveDevice.published(), None, f, 1.0, 50.0)
    peaks = peak_frequencies(f, np.abs(s21), prominence=0.05)
    assert len(peaks) == 1
    assert abs(peaks[0] - 6e9) / 6e9 < 0.10
    assert QuarterWaveDevice.published().resonances()[0] == pytest.approx(6.36e9, rel=1e-2)


@settings(max_examples=25, deadline=None)
@given(st.floats(-2.0, 2.0).filter(lambda x: abs((x % 1.0) - 0.5) > 1e-6), st.integers(-2, 2))
def test_flux_periodic_and_even(phi, k):
    dev = QhvDevice.published()
    f = np.linspace(2e9, 12e9, 23)
    tau = device_transmission(dev, phi, 12.0, 12.0)(f)
    np.testing.assert_allclose(device_transmission(dev, phi + k, 12.0, 12.0)(f), tau, rtol=1e-9, atol=1e-15)
    np.testing.assert_allclose(device_transmission(dev, -phi, 12.0, 12.0)(f), tau, rtol=1e-9, atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_double_pole_exchange_symmetry(a, b):
    dev = DoublePoleDevice.published()
    f = np.linspace(2e9, 12e9, 23)
    t_ab = device_transmission(dev, (a, b), 12.0, 12.0)(f)
    t_ba = device_transmission(dev, (b, a), 12.0, 12.0)(f)
    np.testing.assert_allclose(t_ab, t_ba, rtol=1e-9, atol=1e-15)


def test_double_pole_without_second_qubit_reduces_to_qhv():
    dp = DoublePoleDevice.published()
    qhv = QhvDevice(dp.inductance_per_length, dp.capacitance_per_length, dp.length,
                    dp.coupling_capacitance, dp.transmon_a)
    f = np.linspace(1e9, 10e9, 2001)
    els = dp.elements((0.2, 0.0))
    reduced = els[:3] + els[5:]  # drop C_t and qubit b
    np.testing.assert_allclose(cascade_elements(reduced, f).matrix, build_network(qhv, 0.2, f).matrix, rtol=1e-12)
    # single tunable qubit: two avoided crossings per period, like the QHV
    phis = np.linspace(0, 1, 101)
    maps = []
    for phi in phis:
        e = dp.elements((phi, 0.0))
        maps.append(np.abs(abcd_to_s21(cascade_elements(e[:3] + e[5:], f), 0.1, 0.1)))
    ref = branch_frequency(f, maps, 5.8e9)
    assert count_avoided_crossings(phis, f, maps, ref, 0.05e9)[0] == 2


def test_qhv_quality_factor_from_linewidth():
    dev = QhvDevice.published()
    f = np.linspace(3e9, 9e9, 6001)
    tau = device_transmission(dev, 0.5, 12.0, 12.0)(f)
    q, center = fit_quality_factor(f, tau, order=2)
    assert q == pytest.approx(3.1, rel=0.15)
    assert abs(center - 5.6e9) / 5.6e9 < 0.1


def test_resonance_hints():
    dev = QhvDevice.published()
    res = dev.resonances(0.0)
    assert res[0] == pytest.approx(dev.line.quarter_wave_frequency)
    assert res[1] == pytest.approx(lc_frequency(dev.transmon))
    assert len(QhvDevice.published(asymmetry=0.0).resonances(0.5)) == 1


# -- sweeps ---------------------------------------------------------------------

PORTS = (ThermalPort(12.0, 0.35), ThermalPort(12.0, 0.12))


def test_flux_sweep_matches_direct_calls_and_is_ordered():
    dev = QhvDevice.published()
    phis = [0.0, 0.13, 0.5, 0.77]
    serial = sweep_flux(dev, phis, PORTS, threads=1)
    parallel = sweep_flux(dev, phis, PORTS, threads=3)
    assert [p.coords["flux_phi0"] for p in parallel] == phis
    assert [p.net_power for p in serial] == [p.net_power for p in parallel]
    direct = net_heat_flow(device_transmission(dev, 0.13, 12.0, 12.0), 0.35, 0.12)
    assert serial[1].net_power == direct.net_power


def test_flux_sweep_records_failures_and_continues():
    dev = QhvDevice.published(asymmetry=0.0)
    pts = sweep_flux(dev, [0.0, 0.5, 0.25], PORTS)
    assert [p.ok for p in pts] == [True, False, True]
    assert "SingularInductanceError" in pts[1].error
    assert math.isnan(pts[1].net_power)


def test_double_pole_grid_coordinates():
    grid = flux_grid_2d([0.0, 0.5], [0.1, 0.2, 0.3])
    assert grid[:3] == [(0.0, 0.1), (0.0, 0.2), (0.0, 0.3)]
    pts = sweep_flux(DoublePoleDevice.published(), grid[:2], PORTS, QuadratureOptions(rel_tol=1e-6))
    assert pts[1].coords == {"flux_phi0": 0.0, "flux2_phi0": 0.2}


def test_resistance_and_temperature_sweeps():
    dev = QuarterWaveDevice.published()
    pts = sweep_resistance(dev, [5.0, 50.0], PORTS)
    assert pts[0].coords == {"R_ohm": 5.0}
    one = sweep_resistance(dev, [5.0], PORTS, port=1)
    assert one[0].coords == {"R1_ohm": 5.0}
    assert one[0].net_power == net_heat_flow(device_transmission(dev, None, 5.0, 12.0), 0.35, 0.12).net_power
    with pytest.raises(ValueError):
        sweep_resistance(dev, [5.0], PORTS, port=3)
    temps = sweep_temperature(dev, [0.2, 0.3], PORTS)
    assert temps[0].coords == {"T1_K": 0.2}
    assert temps[0].net_power < temps[1].net_power


def test_modulation_ratio():
    assert modulation_ratio([1.0, 0.25, float("nan")]) == 0.75
    assert math.isnan(modulation_ratio([]))


def test_thread_resolution(monkeypatch):
    monkeypatch.setenv("QHEATNET_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2
    monkeypatch.delenv("QHEATNET_THREADS")
    assert resolve_threads() == 1
    with pytest.raises(ValueError):
        resolve_threads(0)


def test_circuit_transmission_is_bounded():
    dev = DoublePoleDevice.published()
    f = np.linspace(1e6, 3e10, 3001)
    tau = device_transmission(dev, (0.3, -0.35), 0.1, 50.0)(f)
    assert np.all(tau >= 0) and np.all(tau <= 1 + 1e-12)
    assert transmission_probability(build_network(dev, (0.3, -0.35), f), 0.1, 50.0).shape == f.shape


@pytest.mark.parametrize("field", ["length", "coupling_capacitance", "inductance_per_length"])
def test_device_parameters_must_be_positive(field):
    from dataclasses import replace

    with pytest.raises(ParameterDomainError):
        replace(QhvDevice.published(), **{field: 0.0})
    with pytest.raises(ParameterDomainError):
        replace(QuarterWaveDevice.published(), length_2=-1e-3)
    with pytest.raises(ParameterDomainError):
        replace(DoublePoleDevice.published(), qubit_coupling_capacitance=0.0)
