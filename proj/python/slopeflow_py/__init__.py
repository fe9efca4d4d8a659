"""Python interface to the slopeflow solver library.

Re-exports the compiled core: problem description, steady solvers
(shooting and the independent finite-difference reference), a priori
bounds, the linearization / Green's function pipeline, transient
stepping, and the theorem-check suite.
"""

from ._slopeflow import (
    DiffusionProfile,
    GreensTable,
    ProblemSpec,
    SolutionProfile,
    SourceFunction,
    build_diffusion,
    build_greens,
    diffusion_floor,
    existence_condition,
    first_order_residual,
    fixed_point_check,
    green_eval,
    green_solve,
    lipschitz_estimate,
    positivity_scan,
    run_transient,
    solve_oracle,
    solve_steady,
    source_condition_holds,
    sup_norm_bound,
    verify,
)

__all__ = [
    "DiffusionProfile",
    "GreensTable",
    "ProblemSpec",
    "SolutionProfile",
    "SourceFunction",
    "build_diffusion",
    "build_greens",
    "diffusion_floor",
    "existence_condition",
    "first_order_residual",
    "fixed_point_check",
    "green_eval",
    "green_solve",
    "lipschitz_estimate",
    "positivity_scan",
    "run_transient",
    "solve_oracle",
    "solve_steady",
    "source_condition_holds",
    "sup_norm_bound",
    "verify",
]
