"""Casimir free energy, pressure and entropy of free-standing metallic films.

Finite-temperature Lifshitz theory for a film in vacuum, under the plasma
and Drude dielectric models, with the low-temperature closed forms, the
Drude free-energy decomposition, and the Nernst-theorem diagnostics.
"""

from .constants import C, HBAR, KB
from .dielectric import (
    DielectricModel,
    DimensionlessParams,
    FilmState,
    Kind,
    Material,
    asymptotic_window_ok,
    delta_l,
    dimensionless_params,
    epsilon_drude,
    epsilon_plasma,
    gamma_of_T,
    list_materials,
    load_material,
    matsubara_xi,
    parse_material,
    serialize_material,
)
from .lifshitz_core import (
    ConvergenceError,
    DEFAULT_QUAD,
    FreeEnergyResult,
    QuadratureConfig,
    ReflectionPair,
    free_energy,
    phi_alpha,
    reflection,
    zero_T_energy,
)
from .thermo import (
    DEFAULT_DIFF,
    DiffConfig,
    ThermoResult,
    abel_plana_correction,
    entropy,
    pressure,
    thermal_correction,
    thermo_point,
)
from .asymptotics import (
    DrudeDecomposition,
    EntropyAtZero,
    FGammaResult,
    delta_f_plasma,
    delta_p_plasma,
    drude_decompose,
    entropy_drude_zero,
    entropy_drude_zero_exact,
    entropy_plasma_asymptotic,
    f0_drude,
    f0_plasma,
    f_gamma,
    i1_closed,
    i1_exact,
    i2_closed,
    i2_exact,
    r_q_kernels,
    x_bound,
)
from .specialfn import Accuracy, bessel_k, polylog, zeta3

__version__ = "0.1.0"

__all__ = [
    "C",
    "HBAR",
    "KB",
    "Accuracy",
    "ConvergenceError",
    "DEFAULT_DIFF",
    "DEFAULT_QUAD",
    "DielectricModel",
    "DiffConfig",
    "DimensionlessParams",
    "DrudeDecomposition",
    "EntropyAtZero",
    "FGammaResult",
    "FilmState",
    "FreeEnergyResult",
    "Kind",
    "Material",
    "QuadratureConfig",
    "ReflectionPair",
    "ThermoResult",
    "abel_plana_correction",
    "asymptotic_window_ok",
    "bessel_k",
    "delta_f_plasma",
    "delta_l",
    "delta_p_plasma",
    "dimensionless_params",
    "drude_decompose",
    "entropy",
    "entropy_drude_zero",
    "entropy_drude_zero_exact",
    "entropy_plasma_asymptotic",
    "epsilon_drude",
    "epsilon_plasma",
    "f0_drude",
    "f0_plasma",
    "f_gamma",
    "free_energy",
    "gamma_of_T",
    "i1_closed",
    "i1_exact",
    "i2_closed",
    "i2_exact",
    "list_materials",
    "load_material",
    "matsubara_xi",
    "parse_material",
    "phi_alpha",
    "polylog",
    "pressure",
    "r_q_kernels",
    "reflection",
    "serialize_material",
    "thermal_correction",
    "thermo_point",
    "x_bound",
    "zero_T_energy",
    "zeta3",
]
