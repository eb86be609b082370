"""Voigt line-profile functions by optimally truncated asymptotics.

The pair (K, L), defined by K - iL = e^{w^2} erfc(w) with w = y + ix, is
computed two independent exact ways (complementary error function;
defining-integral quadrature) and through exponentially improved asymptotic
expansions: the algebraic series cut at its least term plus a remainder
estimate that is accurate to a relative error exponentially small in r^2,
uniformly through the Stokes line y = 0.

Public entry points re-exported here; the command-line interface is
``voigt-asym`` (module ``voigt_asym.cli``).
"""

from __future__ import annotations

from .exceptions import (
    BelowAsymptoticRangeWarning,
    DomainError,
    PrecisionError,
    QuadratureError,
    SingularInputError,
    StokesCollarWarning,
    UnsupportedOrderError,
    VoigtError,
)
from .numerics import (
    ComplexValue,
    DEFAULT_CONTEXT,
    PrecisionContext,
    erfc_asymptotic,
    erfc_complex,
    integrate_semi_infinite,
    mp_context,
    pochhammer,
    upper_incomplete_gamma_half,
    upper_incomplete_gamma_half_ladder,
)
from .oracle import (
    Evaluation,
    VoigtArgument,
    reduce_to_first_quadrant,
    remainder_exact,
    remainder_ladder,
    voigt_exact_erfc,
    voigt_quadrature,
)
from .coefficients import (
    A2k,
    B2k,
    Bhat2k,
    CoefficientSet,
    E_of_phi,
    ReversionReport,
    ReversionSeries,
    StokesGeometry,
    b0_phi_slope,
    b2k_limit,
    binomial_alpha,
    c_of_phi,
    cjk,
    h_k,
    regenerate_A_via_reversion,
    reversion_series,
    stirling_gamma,
)
from .expansions import (
    RemainderEstimate,
    TruncationPlan,
    algebraic_partial_sums,
    evaluate_via_expansion,
    hat_expansion,
    leading_remainder,
    optimal_truncation,
    terminant_asymptotic,
    theorem1,
    theorem2,
)

__version__ = "0.1.0"

__all__ = [
    "A2k",
    "B2k",
    "BelowAsymptoticRangeWarning",
    "Bhat2k",
    "CoefficientSet",
    "ComplexValue",
    "DEFAULT_CONTEXT",
    "DomainError",
    "E_of_phi",
    "Evaluation",
    "PrecisionContext",
    "PrecisionError",
    "QuadratureError",
    "RemainderEstimate",
    "ReversionReport",
    "ReversionSeries",
    "SingularInputError",
    "StokesCollarWarning",
    "StokesGeometry",
    "TruncationPlan",
    "UnsupportedOrderError",
    "VoigtArgument",
    "VoigtError",
    "algebraic_partial_sums",
    "b0_phi_slope",
    "b2k_limit",
    "binomial_alpha",
    "c_of_phi",
    "cjk",
    "erfc_asymptotic",
    "erfc_complex",
    "evaluate_via_expansion",
    "h_k",
    "hat_expansion",
    "integrate_semi_infinite",
    "leading_remainder",
    "optimal_truncation",
    "mp_context",
    "pochhammer",
    "reduce_to_first_quadrant",
    "regenerate_A_via_reversion",
    "remainder_exact",
    "remainder_ladder",
    "reversion_series",
    "stirling_gamma",
    "terminant_asymptotic",
    "theorem1",
    "theorem2",
    "upper_incomplete_gamma_half",
    "upper_incomplete_gamma_half_ladder",
    "voigt_exact_erfc",
    "voigt_quadrature",
]
