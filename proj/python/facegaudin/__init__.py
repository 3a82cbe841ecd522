"""Face-type elliptic Gaudin model: elliptic functions, transfer matrices, Bethe ansatz checks."""

from ._core import (
    Config,
    ConfigError,
    ConvergenceError,
    DomainError,
    bethe_vector,
    eigen_residual,
    eigenvalue,
    run,
    solve_bethe,
    theta11,
    transfer_matrix,
    w,
    zeta11,
)

__all__ = [
    "Config",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "bethe_vector",
    "eigen_residual",
    "eigenvalue",
    "run",
    "solve_bethe",
    "theta11",
    "transfer_matrix",
    "w",
    "zeta11",
]
