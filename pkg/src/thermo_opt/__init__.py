"""Thermodynamic formalism for almost-additive potentials on Markov shifts.

Pressure, Gibbs cylinder measures and their zero-temperature limits, applied
to maximising measures, joint spectral radii and maximal Lyapunov exponents.
"""

__version__ = "0.1.0"

from .errors import ComputationError, ThermoError, ValidationError
from .gibbs import (
    CylinderMeasure,
    GibbsCertificate,
    cesaro_invariantize,
    energy,
    entropy_rate,
    gibbs_certificate,
    nu_weights,
    periodic_orbit_measure,
    product_measure,
    tail_mass,
    tightness_bound,
)
from .jsr import JsrResult, brute_force_jsr, countable_jsr, periodic_lower_bound, thermo_jsr
from .lyapunov import RepellerSpec, build_cocycle, check_hypotheses, max_lyapunov
from .potentials import (
    GeometricMatrixFamily,
    GeometricScalarFamily,
    MatrixCocycle,
    ScalarPotential,
    certify_constants,
    matrix_norm_potential,
    singular_value_potential,
    summability_report,
)
from .pressure import (
    PressureEstimate,
    asymptotic_slope,
    gurevich_pressure,
    partition_sum,
    pressure_derivative,
    variational_gap,
)
from .shift import (
    ShiftSpace,
    connectivity_data,
    enumerate_periodic_words,
    enumerate_words,
    full_shift,
    golden_mean_shift,
    truncate,
    validate_shift,
)
from .zerotemp import (
    MaximisationResult,
    TemperaturePathRecord,
    brute_force_alpha,
    check_monotonicities,
    extract_maximiser,
    run_path,
)

__all__ = [
    "ComputationError",
    "ThermoError",
    "ValidationError",
    "CylinderMeasure",
    "GibbsCertificate",
    "cesaro_invariantize",
    "energy",
    "entropy_rate",
    "gibbs_certificate",
    "nu_weights",
    "periodic_orbit_measure",
    "product_measure",
    "tail_mass",
    "tightness_bound",
    "JsrResult",
    "brute_force_jsr",
    "countable_jsr",
    "periodic_lower_bound",
    "thermo_jsr",
    "RepellerSpec",
    "build_cocycle",
    "check_hypotheses",
    "max_lyapunov",
    "GeometricMatrixFamily",
    "GeometricScalarFamily",
    "MatrixCocycle",
    "ScalarPotential",
    "certify_constants",
    "matrix_norm_potential",
    "singular_value_potential",
    "summability_report",
    "PressureEstimate",
    "asymptotic_slope",
    "gurevich_pressure",
    "partition_sum",
    "pressure_derivative",
    "variational_gap",
    "ShiftSpace",
    "connectivity_data",
    "enumerate_periodic_words",
    "enumerate_words",
    "full_shift",
    "golden_mean_shift",
    "truncate",
    "validate_shift",
    "MaximisationResult",
    "TemperaturePathRecord",
    "brute_force_alpha",
    "check_monotonicities",
    "extract_maximiser",
    "run_path",
]
