"""Lifted dual solver for non-convex calibration problems."""

from ._core import (
    EXIT_BRACKET,
    EXIT_MISSING,
    EXIT_NOT_CALIBRATED,
    EXIT_NOT_CONVERGED,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    LiftdualError,
    critical_lambda_disc,
    export,
    oracle_1d_value,
    oracle_run,
    project_epigraph,
    solve,
    solve_to_dir,
    sweep_lambda,
    value_function,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
