"""Photonic heat transport through linear superconducting microwave circuits.

Circuits are cascades of ABCD two-ports between two resistive baths; the
transmission probability tau(f) = |S21|^2 enters a Landauer integral for the
net heat flow. Hot kernels run under numba when available
(``QHEATNET_BACKEND=numba|numpy``).
"""

__version__ = "0.1.0"

from .constants import E_CHARGE, H, K_B, PHI_0, PhysicalConstants
from .errors import (
    ConfigError,
    DescriptorError,
    ExportError,
    NumericalError,
    NumericalSingularityError,
    ParameterDomainError,
    QHeatNetError,
    QuadratureError,
    ReferenceImpedanceError,
    SingularElementError,
    SingularInductanceError,
    TouchstoneError,
)
from .network import (
    SeriesCapacitor,
    SeriesImpedance,
    ShuntAdmittance,
    ThermalPort,
    TransmissionLine,
    TransmonShunt,
    TwoPortABCD,
    abcd_to_s11,
    abcd_to_s21,
    abcd_to_transfer_function,
    cascade,
    cascade_elements,
    direct_connection_tau,
    input_impedance,
    tau_parallel,
    tau_series,
    transmission_probability,
)
from .josephson import (
    JosephsonParams,
    TransmonSpec,
    charging_energy,
    josephson_energy,
    josephson_inductance,
    lc_frequency,
    shunt_admittance,
    transmon_frequency,
)
from .thermal import (
    CircuitTransmission,
    ConstantTransmission,
    HeatResult,
    LorentzianTransmission,
    QuadratureOptions,
    bose_population,
    johnson_nyquist_psd,
    net_heat_flow,
    net_power_spectral_density,
    quantum_limited_power,
)
from .devices import (
    DirectConnection,
    DoublePoleDevice,
    QhvDevice,
    QuarterWaveDevice,
    SweepPoint,
    build_network,
    device_transmission,
    sparameters,
    sweep_flux,
    sweep_resistance,
    sweep_temperature,
)
from .touchstone import SParameterTable, interpolated_provider, parse_touchstone, read_touchstone, write_touchstone
from .export import export_results, export_sparameters, export_spectrum, read_results
from .config import RunConfig, load_config
