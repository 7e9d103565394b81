"""Stable error types raised across the package."""

from __future__ import annotations

__all__ = [
    "IVSolverError",
    "NonPositiveInput",
    "PriceBelowIntrinsic",
    "PriceAtOrAboveUpperBound",
    "DomainViolation",
    "GuardViolation",
    "DegenerateVolatility",
    "DegenerateResult",
]


class IVSolverError(Exception):
    """Base class for all solver-domain errors."""


class NonPositiveInput(IVSolverError):
    """Forward, strike, or expiry was not strictly positive."""


class PriceBelowIntrinsic(IVSolverError):
    """Price at or below intrinsic value: no finite positive volatility.

    The zero-volatility case (price exactly intrinsic) is reported here
    rather than as sigma = 0; callers wanting that convention can special
    case this error.
    """


class PriceAtOrAboveUpperBound(IVSolverError):
    """Normalized price >= 1: implied volatility is infinite."""


class DomainViolation(IVSolverError):
    """A seed formula was evaluated outside its fitted domain."""


class GuardViolation(IVSolverError):
    """A guarded asymptotic formula was called with its guard violated."""


class DegenerateVolatility(IVSolverError):
    """Objective evaluated below the defensive volatility floor."""


class DegenerateResult(IVSolverError):
    """A guarded terminal branch could not produce a representable
    volatility (the defensive-zero path, surfaced instead of silent 0.0)."""
