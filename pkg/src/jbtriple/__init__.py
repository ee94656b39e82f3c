"""Calculus on rectangular complex-matrix factors and their max-norm sums.

The toolkit implements the triple product {x, y, z} = (x y* z + z y* x) / 2
blockwise, the operator machinery built on it (quadratic, multiplication and
Bergman operators, Peirce decompositions), an SVD functional calculus (odd
powers and roots, range tripotents, generalized inverses, conorms), and the
geometry that follows: quasi-invertibility with certificates, distance to the
extreme points of the unit ball, the lambda function, and continuity analysis
of the quadratic conorm.  A CLI (``jbtriple``) runs named verification suites
and inspects single elements.
"""

from .algebra import (
    ConjugateLinearMap,
    LinearMap,
    PeirceDecomposition,
    Tripotent,
    as_tripotent,
    bergman_operator,
    involution_at,
    is_complete,
    is_tripotent,
    jordan_product_at,
    l_operator,
    peirce_decompose,
    q_operator,
    triple_product,
)
from .bp import (
    BpCertificate,
    bp_perturbation_bound,
    bump_to_full_rank,
    conorm_perturbation_bound,
    extremal_perturbation,
    extremal_richness_probe,
    is_bp_quasi_invertible,
    m_q,
    quasi_inverse,
)
from .elements import SpaceDescriptor, TripleElement, zero_element
from .errors import (
    DecompositionError,
    InvalidTripotentError,
    NotQuasiInvertibleError,
    PeirceMembershipError,
    PreconditionError,
    SpaceMismatchError,
    TripleError,
)
from .geometry import (
    ContinuityClass,
    GeometryReport,
    LambdaValue,
    continuity_classify,
    continuity_witness,
    convex_decompose,
    dist_to_extreme_points,
    geometry_report,
    lambda_value,
    nearest_extreme_point,
    tripotent_conorm_continuity_case,
)
from .sampling import sample_element
from .serialization import load_element, parse_inline, save_element
from .spectral import (
    INFINITY,
    ConormValue,
    SvdCache,
    cstar_conorm,
    generalized_inverse,
    is_von_neumann_regular,
    odd_power,
    odd_root,
    quadratic_conorm,
    range_tripotent,
    svd_cache,
)
from .suites import ExperimentConfig, SuiteReport, run_suite
from .version import VERSION

__version__ = VERSION
