"""Transport in stochastic Goupillaud media driven by increasing Lévy processes."""

from .characteristics import (
    Characteristic,
    convergence_probe,
    gamma_discrete,
    gamma_limit,
    is_continuity_point,
)
from .dyadic_medium import (
    LayeredMedium,
    PiecewiseLinearPath,
    build_medium,
    interpolate,
    inverse,
    polygon_at_level,
    speed_at,
)
from .fio import fio_evaluate, fio_tolerance
from .initial_data import Gaussian, SmoothedStep, Triangular, closed_form_transform
from .levy_paths import (
    GridPath,
    JumpPath,
    SubordinatorSpec,
    coarsen,
    evaluate,
    generalized_inverse,
    increments_at_level,
    left_limit,
    sample_compound_poisson,
    sample_gamma_grid,
    sample_path,
)
from .transport import (
    Box,
    ErrorReport,
    EvaluationGrid,
    SolutionField,
    lp_error,
    mc_expected_error,
    solve_discrete,
    solve_limit,
)

__version__ = "0.1.0"
