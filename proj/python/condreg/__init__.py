"""Condition-number-constrained covariance and precision estimation.

Thin re-export of the compiled core. Matrices are numpy arrays; spectra passed
to the eigenvalue-level solvers must be sorted non-increasing.
"""

from ._core import (
    ClampedEigenSolution,
    DomainError,
    Error,
    InvalidInput,
    NumericalError,
    ProjectionPath,
    SolutionPath,
    SpectralLoss,
    condition_number,
    eigendecompose,
    estimate,
    estimate_sparse_unconstrained,
    estimate_sparse_wellconditioned,
    gaussian_path,
    generic_path,
    make_illustration_precision,
    oracle_univariate,
    project,
    project_path,
    prox_l1_offdiag,
    pseudo_objective,
    quadratic_path,
    sample_covariance,
    sample_mvn,
    smooth_gradient,
    smooth_value,
    soft_threshold,
    solution_path,
    solve_fixed_kappa,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
