"""Accelerated random-direction search with configurable non-Euclidean prox-structures.

The solver couples a directional gradient step with a mirror step driven by a
prox-function d(x) = ||x||_a^2 / (2(a-1)); companion verifiers estimate the
sphere-moment bounds behind its rate constant, and a harness reruns the
benchmark quadratic across seeds and prox exponents.
"""

from .driver import (
    AcdsConfig,
    AcdsState,
    RunRecord,
    convergence_bound,
    grad_step,
    initial_divergence,
    iterations_for_accuracy,
    rate_constant,
    rate_constant_general,
    run_acds,
    schedule,
    step,
)
from .errors import (
    AcdsError,
    ConfigurationError,
    ConvergenceError,
    DivergenceError,
    InvalidExponentError,
    SolverError,
)
from .linalg import dominant_eigenvalue, holder_conjugate, matvec, pnorm
from .oracle import (
    Objective,
    QuadraticProblem,
    fd_check,
    model_quadratic,
    quad_dir_deriv,
    quad_value,
    quadratic_problem,
)
from .prox import (
    ProxStructure,
    bregman,
    inverse_mirror_map,
    make_prox,
    mirror_map,
    mirror_step,
    mirror_step_bisection,
    prox_value,
)
from .sphere import ReplaySampler, SphereSampler
from .verify import (
    BoxRegion,
    CounterexampleReport,
    McEstimate,
    check_estimator_qnorm_moment,
    check_projection_identity,
    check_qnorm_moment,
    check_weighted_qnorm_moment,
    counterexample_experiment,
    prog,
    project_box,
)

__version__ = "0.1.0"
