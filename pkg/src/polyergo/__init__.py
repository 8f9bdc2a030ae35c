"""Averages along polynomial lattice mappings and their Fourier analysis.

The package builds the canonical exponent set, forms the averaging
operators and their multipliers, decomposes the torus into arcs, and
empirically verifies the quantitative estimates (Gauss-sum decay,
oscillatory-integral bounds, variational inequalities, transference to
measure-preserving systems) that drive pointwise convergence results.
"""

from .averaging import (
    DEFAULT_QUAD,
    MultiplierValue,
    QuadratureSpec,
    SparseKernel,
    TorusGrid,
    average_direct,
    average_transform,
    build_kernel,
    fourier_project,
    kernel_for_map,
    maximal_function,
    multiplier_m,
    multiplier_m_grid,
    phi,
    scale_norm,
)
from .backend import BACKEND
from .circle import (
    ArcClassification,
    ArcParams,
    ArcShellRecord,
    BumpSpec,
    GridErrorPoint,
    SplitSchedule,
    bump,
    bump_aniso,
    classify_arc,
    count_terms_exhaustive,
    dirichlet_approx,
    eta_radius,
    eta_s,
    iw_schedule,
    lambda_mult,
    nearest_center_in_band,
    nu,
    nu_on_grid,
    nu_terms,
    omega,
    refine_arc_membership,
    rho_t,
    approx_error_grid,
)
from .dynamics import (
    CyclicShiftSystem,
    TorusRotationSystem,
    convergence_report,
    ergodic_average,
    transference_check,
)
from .errors import (
    ContractError,
    DomainError,
    PolyergoError,
    QuadratureError,
    SizeCapError,
)
from .expsum import (
    FactorialModulus,
    RationalPoint,
    divisor_family,
    factorial_modulus,
    fit_decay,
    gauss_sum,
    gauss_sum_table,
    rational_family,
    reduced_residues,
    residue_count,
)
from .lattice import Box, LatticeFunction
from .polymap import (
    DegreeMatrix,
    LiftedSystem,
    MultiIndexSet,
    PolynomialMap,
    anisotropic_scale,
    build_gamma,
    canonical_coords_int,
    eval_canonical,
    identity_lift,
    lift_polynomial_map,
    parse_polynomial_map,
)
from .variation import (
    RealSequence,
    VariationResult,
    dyadic_decompose,
    balanced_partition,
    long_short_split,
    select_block_count,
    variation_bruteforce,
    variation_exact,
    variation_with_sup,
)

__version__ = "0.1.0"
