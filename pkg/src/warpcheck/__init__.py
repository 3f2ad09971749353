"""Curvature of chart metrics via second-order jets, and verifiers for
Einstein warped products with Einstein base and fiber."""

from .errors import (
    ArityError,
    DomainError,
    DomainViolation,
    ParseError,
    SingularityError,
    UsageError,
    ValidationError,
    WarpcheckError,
)
from .geometry import (
    CurvatureAtPoint,
    MetricField,
    ScalarField,
    christoffel,
    conformal_christoffel,
    conformal_hessian,
    gradient_norm_sq,
    hessian_scalar,
    hyperbolic_gradient_norm_sq,
    laplacian,
    ricci,
)
from .jets import Jet2, seed_point, seed_variable
from .models import (
    SpaceFormSpec,
    WarpParams,
    corollary4_check,
    corollary5_check,
    flat_metric,
    hyperbolic_metric,
    space_form,
    sphere_metric,
    theorem2_warp,
    warp_constant,
)
from .verify import (
    check_condition_i,
    check_condition_iii,
    check_pde_system,
    corollary3_radius,
    einstein_residual,
    fiber_lambda_from_c,
    lambda_from_base,
    run_theorem1_suite,
    sample_points,
)
from .warped import (
    RicciBlocks,
    WarpedProductSpec,
    assemble_product_metric,
    cross_check_ricci,
    oneill_ricci,
)

__version__ = "0.1.0"
