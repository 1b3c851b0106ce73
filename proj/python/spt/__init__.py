"""Superradiant phase diagrams from Landau potentials and exact diagonalization."""

from ._core import (
    BudgetExceeded,
    ConfigError,
    ConvergenceError,
    DimensionMismatch,
    DomainError,
    Error,
    Model,
    UnstableModel,
    anisotropic_rabi_stark,
    classify,
    critical_hopping,
    dicke,
    ed_solve,
    gradient,
    minimize,
    parameter_boundary,
    potential,
    rabi_stark_hubbard,
    radial_boundary,
    sweep,
)

__all__ = [
    "BudgetExceeded",
    "ConfigError",
    "ConvergenceError",
    "DimensionMismatch",
    "DomainError",
    "Error",
    "Model",
    "UnstableModel",
    "anisotropic_rabi_stark",
    "classify",
    "critical_hopping",
    "dicke",
    "ed_solve",
    "gradient",
    "minimize",
    "parameter_boundary",
    "potential",
    "rabi_stark_hubbard",
    "radial_boundary",
    "sweep",
]
