"""Principal half-eigenvalues of the Pucci extremal operator on rotationally symmetric balls.

The radial eigenvalue problem is solved by shooting from the pole. Around
the solver sit curvature diagnostics for warped metrics, Barta-type bounds
for test functions, and sweeps that check the curvature comparison
inequalities numerically.
"""

from .barta import (
    BartaBounds,
    TestFunction,
    barta_bounds,
    builtin_test_function,
    load_test_function_csv,
    maxmin_estimate,
    minmax_estimate,
    random_smooth_family,
)
from .comparison import (
    ComparisonRow,
    cheng_compare,
    lemma_checks,
    revolution_compare,
    run_cheng_sweep,
    run_revolution_sweep,
    shifted_test_function,
)
from .eigensolver import HalfEigenvalue, dual_check, principal_half_eigenvalue, refine, residual_sup
from .exceptions import (
    DomainError,
    InconsistencyError,
    InvalidProfileError,
    InvalidTestFunctionError,
    NoConvergenceError,
    PucciError,
    ResolutionError,
)
from .geometry import (
    GeodesicBall,
    ProfileCurve,
    ProfileWarp,
    SpaceFormWarp,
    TabulatedWarp,
    arc_length_reparametrize,
    builtin_profile,
    curvature_profile,
    is_admissible,
    load_profile_csv,
    load_warp_csv,
    space_form_ball,
)
from .pucci_core import PucciParams, RadialFunction, m_minus, m_plus, pucci_at_origin, pucci_radial
from .radial_ode import shoot

__version__ = "0.1.0"
