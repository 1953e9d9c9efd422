"""Numerical toolkit for Grüss-type inequalities on matrices.

The package evaluates the quantities that appear in bounds for the
state covariance ``V_P(A, T) = tr(PAT) - tr(PA) tr(PT)``: numerical ranges and
their enclosing discs, the distance of a matrix to the scalars, variances of
states, and the ordered chains of upper bounds relating them.
"""

from .errors import (
    ConvergenceError,
    DimensionError,
    GrussError,
    NotHermitianError,
    PreconditionError,
    UnknownFixtureError,
)
from .linalg import (
    DEFAULT_SETTINGS,
    DensityOperator,
    OptimizerSettings,
    abs_value,
    hermitian_eig,
    hs_inner,
    jacobi_eigh,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    psd_sqrt,
    save_matrix,
    schatten_norm,
    spectral_norm,
    trace,
    trace_functionals,
)
from .geometry import (
    Disc,
    FieldOfValues,
    is_normaloid,
    is_transloid_sampled,
    numerical_radius,
    numerical_range_boundary,
    numerical_range_disc,
    smallest_enclosing_disc,
    spectral_radius,
    spectrum,
)
from .distance import (
    center_of_mass_limit,
    commutator_sup,
    dist_characterizations,
    dist_orthogonal_pairs,
    dist_sphere,
    dist_to_line,
    dist_to_scalars,
)
from .variance import audenaert_max, dragomir_bound, semi_inner, v_p, variance, variance_identities
from .bounds import (
    BoundChainReport,
    h_factor,
    kantorovich_check,
    normal_chain,
    normaloid_corollary_chain,
    profile,
    refined_chain,
    renaud_bound,
    renaud_chain,
    renaud_k_chain,
    sup_estimate,
    transloid_chain,
)
from .zoo import ZooSpec, fixture, fixtures, generate

__version__ = "0.1.0"
