"""Stage-coupled convex decision problems.

Offline solvers (nested resource-allocation decomposition, dense simplex),
an online engine that fixes decisions stage by stage under a predicted
Lagrange-multiplier vector, regret bounds for under-predictions, and the
experiment harness used to evaluate multiplier candidates.
"""

from ._oddo import (
    ConfigError,
    DomainError,
    InfeasibleError,
    SolverError,
    candidate,
    evaluate,
    generate_instance,
    run_online,
    solve_offline,
    theorem1_bound,
    verify,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "InfeasibleError",
    "SolverError",
    "candidate",
    "evaluate",
    "generate_instance",
    "run_online",
    "solve_offline",
    "theorem1_bound",
    "verify",
]
