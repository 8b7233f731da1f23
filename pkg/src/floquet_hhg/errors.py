"""Exception types shared across the package."""
from __future__ import annotations


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to converge within its budget.

    Carries enough context (depth, iteration count, residual) in the
    message to diagnose the failure without re-running.
    """
