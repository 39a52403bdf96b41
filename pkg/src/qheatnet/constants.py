"""CODATA 2018 exact constants (SI)."""

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    h: float = 6.62607015e-34
    k_B: float = 1.380649e-23
    e: float = 1.602176634e-19
    Phi_0: float = 2.067833848e-15


CONSTANTS = PhysicalConstants()

H = CONSTANTS.h
K_B = CONSTANTS.k_B
E_CHARGE = CONSTANTS.e
PHI_0 = CONSTANTS.Phi_0
