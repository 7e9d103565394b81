"""The erfcx-factored log-price objective and its derivative ratios.

For h = x/v and t = v/2 the normalized OTM log price factors as

    ln c = -(h^2 + t^2)/2 - ln 2 - x/2 + ln(N+ - N-),
    N+ = erfcx(-(h+t)/sqrt 2),  N- = erfcx(-(h-t)/sqrt 2),

which stays finite and smooth even when the price itself would underflow.
The three derivative ratios consumed by a third-order Householder step
follow from N+ - N- with no further erfcx evaluations:

    l'      = (2/sqrt(2 pi)) / (N+ - N-)
    l''/l'  = (h+t)(h-t)/v - l'
    l'''/l' = (-3h^2 - t^2 + (h^2-t^2)^2)/v^2 - 3 l' (l''/l') - l'^2
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DegenerateVolatility
from .kernels import ErfcxTier, erfcx_exact, erfcx_fast

__all__ = [
    "HtCoords",
    "DerivativeBundle",
    "ht_coords",
    "log_price",
    "derivative_bundle",
    "complementary_price",
]

_INV_SQRT2 = 0.7071067811865475244008443621048
_TWO_OVER_SQRT_2PI = 0.7978845608028653558798921198688
_VOL_HARD_FLOOR = 1e-300


class HtCoords(NamedTuple):
    """Scaled coordinates h = x/v <= 0 and t = v/2 > 0 (so h t = x/2)."""

    h: float
    t: float


class DerivativeBundle(NamedTuple):
    """Objective value and the derivative ratios for one H3 step."""

    f: float  # ln c(x, v) - ln c_target
    lp: float  # l'(v) > 0
    d2: float  # l''/l'
    d3: float  # l'''/l'


def ht_coords(x: float, v: float) -> HtCoords:
    return HtCoords(x / v, 0.5 * v)


def log_price(
    x: float, v: float, tier: ErfcxTier = ErfcxTier.EXACT
) -> tuple[float, float, float]:
    """Evaluate ln c(x, v) with the selected erfcx tier.

    Returns (lnc, N+, N-).  If N+ - N- rounds to zero (never observed in the
    benchmark domain) lnc is -inf and the caller's step logic degrades
    gracefully.

    Raises:
        DegenerateVolatility: v below the 1e-300 defensive floor.
    """
    if v < _VOL_HARD_FLOOR:
        raise DegenerateVolatility(f"total volatility {v!r} below defensive floor")
    fx = erfcx_exact if tier is ErfcxTier.EXACT else erfcx_fast
    h = x / v
    t = 0.5 * v
    n_plus = fx(-(h + t) * _INV_SQRT2)
    n_minus = fx(-(h - t) * _INV_SQRT2)
    diff = n_plus - n_minus
    if diff > 0.0:
        lnc = -0.5 * (h * h + t * t) - math.log(2.0) - 0.5 * x + math.log(diff)
    else:
        lnc = -math.inf
    return lnc, n_plus, n_minus


def derivative_bundle(
    x: float, v: float, lnc_target: float, tier: ErfcxTier = ErfcxTier.EXACT
) -> DerivativeBundle:
    """Objective residual and H3 derivative ratios at (x, v).

    Costs exactly the two erfcx evaluations inside log_price; the ratios are
    elementary arithmetic on h, t, and l'.
    """
    lnc, n_plus, n_minus = log_price(x, v, tier)
    h = x / v
    t = 0.5 * v
    lp = _TWO_OVER_SQRT_2PI / (n_plus - n_minus)
    h2 = h * h
    t2 = t * t
    d2 = (h + t) * (h - t) / v - lp
    d3 = (-3.0 * h2 - t2 + (h2 - t2) * (h2 - t2)) / (v * v) - 3.0 * lp * d2 - lp * lp
    return DerivativeBundle(lnc - lnc_target, lp, d2, d3)


def complementary_price(x: float, v: float) -> tuple[float, float]:
    """q(v) = 1 - c(x, v) without forming 1 - c, plus the vega phi(d1).

    q = Phi(-d1) + e^{-x} Phi(d2) with both normal tails evaluated through
    the exact erfcx, so the complementary objective ln q keeps full relative
    accuracy as c -> 1.  Returns (q, phi_d1).
    """
    h = x / v
    t = 0.5 * v
    d1 = h + t
    d2 = h - t
    # Phi(-d1) = e^{-d1^2/2} erfcx(d1/sqrt 2) / 2, accurate for either sign.
    phi_m_d1 = 0.5 * math.exp(-0.5 * d1 * d1) * erfcx_exact(d1 * _INV_SQRT2)
    # e^{-x} Phi(d2) = e^{-x - d2^2/2} erfcx(-d2/sqrt 2) / 2
    phi_d2_scaled = 0.5 * math.exp(-x - 0.5 * d2 * d2) * erfcx_exact(-d2 * _INV_SQRT2)
    q = phi_m_d1 + phi_d2_scaled
    vega = math.exp(-0.5 * d1 * d1) * 0.5 * _TWO_OVER_SQRT_2PI
    return q, vega
