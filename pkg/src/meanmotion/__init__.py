"""Mean motions of multivariate exponential polynomials.

Computes the average rotation rates c+(y), c-(y) of arg P along
horizontal lines by two independent routes (expanding-box averages and
the torus-average oracle over a lattice lift of the exponents) and
cross-validates their agreement.
"""

from .core import (
    ExpPolynomial,
    ExpTerm,
    FrequencyVector,
    LiftedPolynomial,
    Rational,
    UnivariateExpSum,
    evaluate,
    is_identically_zero,
    lift,
    restrict_line,
)
from .errors import (
    DegenerateInputError,
    DependenceError,
    DimensionError,
    EndpointZeroError,
    InternalConsistencyError,
    MeanMotionError,
    MembershipError,
    PolynomialLoadError,
    SingularContourError,
    TrackingError,
)
from .io import parse_polynomial_file, polynomial_to_dict, write_polynomial_file
from .lattice import (
    IndependenceResult,
    LatticeBasis,
    check_independence,
    coordinates,
    group_basis,
)
from .motion import (
    BoxSpec,
    MeanMotionEstimate,
    SkippedLine,
    WindowSchedule,
    box_mean_motion,
    compare_estimators,
    direct_mean_motion,
    torus_mean,
    weyl_average,
    windowed_increment,
)
from .tracker import (
    ArgTrace,
    TrackerConfig,
    Zero,
    arg_increment,
    arg_increment_pair,
    count_zeros_rectangle,
    locate_zeros,
    winding_number,
)

__version__ = "0.1.0"
