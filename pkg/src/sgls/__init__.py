"""Function-space norms on half-spaces and the reflection extension operator.

Public surface:

* generating functions (``psi``), fields and multi-indices (``fields``),
* quadrature-backed L_p / Sobolev / weighted sup-over-p norms
  (``quadrature``, ``norms``),
* the reflection extension with exact rational coefficients (``extension``),
* an empirical verification suite for the operator-norm bound (``verify``),
* a TOML-configured CLI (``sgls``) emitting deterministic JSON/CSV reports.
"""

from .errors import (
    BoundViolationError,
    CoefficientOrderError,
    ConfigError,
    DerivativeOrderError,
    ExponentError,
    NormInconsistencyError,
    OutOfDomainError,
    PositivityError,
    QuadratureConvergenceError,
    SglsError,
    SupportIntervalError,
    TruncationError,
    UnsupportedFamilyError,
)
from .fields import (
    Field,
    HalfSpaceDomain,
    MultiIndex,
    bump_field,
    gaussian_field,
    grid_field,
    grid_field_from_csv,
    multi_indices_up_to,
    poly_times_bump_field,
    scale_field,
    separable_field,
    write_grid_csv,
)
from .psi import (
    PsiSpec,
    make_constant_psi,
    make_custom_psi,
    make_grand_psi,
    make_power_psi,
    psi_validate,
)
from .quadrature import Box, QuadratureSpec, lp_norm, lp_norm_halfspace
from .norms import NormReport, PGridSpec, gls_norm, sgls_norm, sobolev_norm
from .extension import (
    ExtendedField,
    HestenesCoefficients,
    extend,
    extended_derivative,
    extension_constant_sharp,
    hestenes_coefficients,
    operator_norm_bound,
)
from .verify import (
    OperatorNormEstimate,
    SuiteConfig,
    SuiteField,
    check_boundary_matching,
    check_scaling_identity,
    default_suite,
    estimate_operator_norm,
    run_full_suite,
)

__version__ = "0.1.0"
