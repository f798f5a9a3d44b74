"""Positive-constrained RBF partition-of-unity interpolation."""

from ._pcpu import (
    ConfigError,
    CoverageError,
    DomainError,
    Error,
    IngestError,
    Model,
    NumericalFailure,
    PatchInfeasible,
    eco_surface,
    error_report,
    eval_grid,
    fit,
    global_fit,
    positive_qp,
    random_nodes,
    shepard,
    test_function,
)

__all__ = [
    "ConfigError",
    "CoverageError",
    "DomainError",
    "Error",
    "IngestError",
    "Model",
    "NumericalFailure",
    "PatchInfeasible",
    "eco_surface",
    "error_report",
    "eval_grid",
    "fit",
    "global_fit",
    "positive_qp",
    "random_nodes",
    "shepard",
    "test_function",
]
