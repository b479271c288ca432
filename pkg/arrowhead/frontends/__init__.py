from .burgers import (
    BurgersState,
    boundary_values,
    bump_initial,
    burgers_step,
    heat_half_step,
    indicator_initial,
    run_burgers,
)
from .pcg import (
    GradedProblem,
    PcgConfig,
    PcgResult,
    VariableCoefficient,
    apply_variable_coefficient,
    graded_mesh,
    graded_problem,
    laplacian_apply,
    log_coefficient,
    pcg_solve,
    solve_graded_problem,
)

__all__ = [
    "BurgersState",
    "GradedProblem",
    "PcgConfig",
    "PcgResult",
    "VariableCoefficient",
    "apply_variable_coefficient",
    "boundary_values",
    "bump_initial",
    "burgers_step",
    "graded_mesh",
    "graded_problem",
    "heat_half_step",
    "indicator_initial",
    "laplacian_apply",
    "log_coefficient",
    "pcg_solve",
    "run_burgers",
    "solve_graded_problem",
]
