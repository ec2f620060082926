"""Lattice Green's functions of face-centered cubic lattices.

Exact excursion counting, certified recurrence and operator guessing,
Ore-algebra manipulation with telescoper certificate verification, staged
long-series extension, and high-precision return probabilities.
"""

from .errors import (
    GuessInconsistencyError,
    InsufficientDataError,
    LgfError,
    NoApplicableRecurrenceError,
    PrecisionLossError,
    ResourceError,
    SingularPointError,
    ValidationError,
    VerificationError,
)
from .lattice import Lattice, StructureFunction, fcc_step_set
from .walkcount import WalkTable, count_excursions, count_walk_table, mass_check
from .analytic import count_excursions_analytic, lgf_series_wallis, wallis_moment
from .series import (
    ExactSeries,
    check_excursion_series,
    dump_series,
    parse_series,
    series_from_counts,
)
from .operators import LinearODE, LinearRecurrence, MultivariateRecurrence
from .guess import (
    box_support,
    guess_multivariate_recurrence,
    guess_ode,
    guess_recurrence,
)
from .ore import (
    IntegrandSpec,
    OreContext,
    OrePolynomial,
    apply_ode_to_series,
    apply_operator_to_integrand,
    certify_telescoper,
    dump_certificate,
    indicial_polynomial,
    ode_to_recurrence,
    ore_multiply,
    quotient_closure,
    verify_certificate_stream,
)
from .multistep import multi_step_pipeline
from .numerics import (
    BigFloat,
    ExtrapolationModel,
    LimitEstimate,
    common_digits,
    default_window,
    detect_divergence,
    extend_sequence,
    extrapolate_limit,
    return_probability,
)

__version__ = "0.1.0"

__all__ = [
    "BigFloat",
    "ExactSeries",
    "ExtrapolationModel",
    "GuessInconsistencyError",
    "InsufficientDataError",
    "IntegrandSpec",
    "Lattice",
    "LgfError",
    "LimitEstimate",
    "LinearODE",
    "LinearRecurrence",
    "MultivariateRecurrence",
    "NoApplicableRecurrenceError",
    "OreContext",
    "OrePolynomial",
    "PrecisionLossError",
    "ResourceError",
    "SingularPointError",
    "StructureFunction",
    "ValidationError",
    "VerificationError",
    "WalkTable",
    "apply_ode_to_series",
    "apply_operator_to_integrand",
    "box_support",
    "certify_telescoper",
    "check_excursion_series",
    "common_digits",
    "count_excursions",
    "count_excursions_analytic",
    "count_walk_table",
    "default_window",
    "detect_divergence",
    "dump_certificate",
    "dump_series",
    "extend_sequence",
    "extrapolate_limit",
    "fcc_step_set",
    "guess_multivariate_recurrence",
    "guess_ode",
    "guess_recurrence",
    "indicial_polynomial",
    "lgf_series_wallis",
    "mass_check",
    "multi_step_pipeline",
    "ode_to_recurrence",
    "ore_multiply",
    "parse_series",
    "quotient_closure",
    "return_probability",
    "series_from_counts",
    "verify_certificate_stream",
    "wallis_moment",
]
