"""Quote normalization: reduce any admissible call/put quote to the
normalized out-of-the-money representation, and map solved total volatility
back to annualized volatility.

Every admissible input becomes an undiscounted OTM call on the ordered pair
(F*, K*) = (min(F,K), max(F,K)) via put-call parity, with

    x = ln(F*/K*) <= 0,   c = C_otm / F* in (0, 1),   v = sigma sqrt(T).

Discounting is the caller's responsibility: prices are undiscounted
throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import NonPositiveInput, PriceAtOrAboveUpperBound, PriceBelowIntrinsic

__all__ = ["OptionKind", "OptionQuote", "NormalizedQuote", "normalize", "denormalize"]


class OptionKind(enum.Enum):
    CALL = "call"
    PUT = "put"


@dataclass(frozen=True)
class OptionQuote:
    """An undiscounted vanilla option quote.

    price must lie strictly between intrinsic value and its upper bound
    (F for calls, K for puts); both bounds are enforced by normalize().
    """

    kind: OptionKind
    forward: float
    strike: float
    price: float
    expiry: float


@dataclass(frozen=True)
class NormalizedQuote:
    """An admissible inversion input in OTM-normalized coordinates.

    ln(c) is computed once at construction and threaded through the solver
    (it is part of the per-call overhead budget, not the iteration).
    """

    x: float
    ex: float  # e^x = F*/K*
    c: float
    lnc: float
    expiry: float

    @property
    def beta(self) -> float:
        """Sqrt-forward normalized price c e^{x/2} = C_otm / sqrt(F* K*)."""
        return self.c * math.exp(0.5 * self.x)

    @property
    def moneyness_gap(self) -> float:
        """m = -x >= 0, the log-moneyness gap of the OTM representation."""
        return -self.x

    @classmethod
    def from_parts(cls, x: float, c: float, expiry: float) -> "NormalizedQuote":
        if not (x <= 0.0) or not math.isfinite(x):
            raise NonPositiveInput(f"log-moneyness must be finite and <= 0, got {x!r}")
        if expiry <= 0.0 or not math.isfinite(expiry):
            raise NonPositiveInput(f"expiry must be positive, got {expiry!r}")
        if c <= 0.0:
            raise PriceBelowIntrinsic(f"normalized price must be > 0, got {c!r}")
        if c >= 1.0:
            raise PriceAtOrAboveUpperBound(f"normalized price must be < 1, got {c!r}")
        return cls(x=x, ex=math.exp(x), c=c, lnc=math.log(c), expiry=expiry)


def normalize(quote: OptionQuote) -> NormalizedQuote:
    """Reduce a quote to (x, e^x, c, ln c, T) per the four-case parity table.

    Raises:
        NonPositiveInput: F, K, or T not strictly positive.
        PriceBelowIntrinsic: price at or below intrinsic (sigma would be 0).
        PriceAtOrAboveUpperBound: normalized price >= 1 (sigma infinite).
    """
    f, k, t = quote.forward, quote.strike, quote.expiry
    if not (f > 0.0 and math.isfinite(f)):
        raise NonPositiveInput(f"forward must be positive, got {f!r}")
    if not (k > 0.0 and math.isfinite(k)):
        raise NonPositiveInput(f"strike must be positive, got {k!r}")
    if not (t > 0.0 and math.isfinite(t)):
        raise NonPositiveInput(f"expiry must be positive, got {t!r}")
    if not math.isfinite(quote.price):
        raise NonPositiveInput(f"price must be finite, got {quote.price!r}")

    # C_otm by put-call parity, exchanging forward and strike for OTM puts.
    if quote.kind is OptionKind.CALL:
        c_otm = quote.price if f <= k else quote.price - (f - k)
        intrinsic = max(f - k, 0.0)
    else:
        c_otm = quote.price if f >= k else quote.price - (k - f)
        intrinsic = max(k - f, 0.0)

    if quote.price <= intrinsic:
        raise PriceBelowIntrinsic(
            f"price {quote.price!r} is at or below intrinsic {intrinsic!r}"
        )

    f_star = min(f, k)
    c = c_otm / f_star
    if c >= 1.0:
        raise PriceAtOrAboveUpperBound(
            f"normalized OTM price {c!r} is at or above the upper bound 1"
        )
    x = math.log(f_star / max(f, k))
    if x > 0.0:  # guard against rounding of log at F == K
        x = 0.0
    return NormalizedQuote(x=x, ex=f_star / max(f, k), c=c, lnc=math.log(c), expiry=t)


def denormalize(total_vol: float, expiry: float) -> float:
    """Annualized volatility sigma = v / sqrt(T)."""
    return total_vol / math.sqrt(expiry)
