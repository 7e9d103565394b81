"""Testing-grade ground truth: a double-double normalized Black price and a
bisection-based implied-volatility reference.

Used to generate benchmark datasets and to validate solver claims.  The
extended-precision price follows the same erfcx log-price decomposition as
the solver but in ~31-digit double-double arithmetic, with a Taylor branch
for the near-ATM low-volatility cancellation corner.  Never called on the
solver hot path.

Accuracy: relative error of the pre-rounding price is ~1e-29 wherever the
price stays above ~1e-280 (below that, the low word of the double-double
result denormalizes and precision tapers to plain double at the underflow
boundary, which is far outside the benchmark domain).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special

from . import ddmath as dd
from .kernels import norm_cdf_inv

__all__ = [
    "ReferenceCase",
    "black_price_hi",
    "black_price_hi_batch",
    "log_black_price_hi_batch",
    "iv_reference",
    "iv_reference_batch",
    "ulp_error",
    "BracketFailure",
]

_LN2_DD = dd.LN2
_INV_SQRT2_DD = dd.INV_SQRT2
_TWO_OVER_SQRT_PI = dd.TWO_OVER_SQRT_PI

# Taylor-difference branch triggers: the fixed near-ATM small-volatility box,
# plus an adaptive guard wherever the direct subtraction would cancel more
# than six digits.
_TAYLOR_X = 1e-4
_TAYLOR_V = 1e-2
_CANCEL_RATIO = 1e-6
_TAYLOR_ODD_TERMS = 13


class BracketFailure(Exception):
    """The requested normalized price is not attainable by bisection."""


@dataclass(frozen=True)
class ReferenceCase:
    """One ground-truth pair: price c_ref correctly rounded from the
    double-double evaluation at the reference total volatility v_ref."""

    x: float
    v_ref: float
    c_ref: float


def _diff_taylor(m: dd.DD, delta: dd.DD) -> dd.DD:
    """erfcx(m - delta) - erfcx(m + delta) via the odd midpoint Taylor series.

    With w = erfcx, w^{(n+1)} = 2n w^{(n-1)} + 2m w^{(n)}, so the scaled
    coefficients c_n = w^{(n)}/n! satisfy
    c_{n+1} = (2 c_{n-1} + 2m c_n) / (n+1) and the difference is
    -2 (c_1 d + c_3 d^3 + ...).  Cancellation-free for small |2 m delta|.
    """
    shape = np.broadcast(m[0], m[1]).shape
    two_m = dd.mul_d(m, 2.0)
    c_prev = dd.erfcx(m)  # c_0
    c_cur = dd.sub(dd.mul(two_m, c_prev), _TWO_OVER_SQRT_PI)  # c_1
    d2 = dd.sqr(delta)
    acc = dd.mul(c_cur, delta)  # c_1 * delta
    dpow = delta
    for k in range(1, _TAYLOR_ODD_TERMS):
        n = 2 * k - 1
        # advance two orders: c_{n+1}, c_{n+2}
        c_next = dd.div_d(dd.add(dd.mul_d(c_prev, 2.0), dd.mul(two_m, c_cur)), float(n + 1))
        c_prev, c_cur = c_cur, c_next
        c_next = dd.div_d(dd.add(dd.mul_d(c_prev, 2.0), dd.mul(two_m, c_cur)), float(n + 2))
        c_prev, c_cur = c_cur, c_next
        dpow = dd.mul(dpow, d2)
        acc = dd.add(acc, dd.mul(c_cur, dpow))
    return dd.mul_d(acc, -2.0)


def log_black_price_hi_batch(x: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """ln c(x, v) in double-double over arrays (x <= 0, v > 0).

    Returns the (hi, lo) pair; hi + lo carries ~30 significant digits.
    """
    x = np.asarray(x, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    x_dd = dd.from_double(x)
    v_dd = dd.from_double(v)
    h = dd.div(x_dd, v_dd)
    t = dd.mul_d(v_dd, 0.5)
    m = dd.mul(dd.neg(h), _INV_SQRT2_DD)  # midpoint >= 0
    delta = dd.mul(t, _INV_SQRT2_DD)
    a = dd.sub(m, delta)
    b = dd.add(m, delta)
    n_plus = dd.erfcx(a)
    n_minus = dd.erfcx(b)
    diff = dd.sub(n_plus, n_minus)

    need_taylor = ((np.abs(x) <= _TAYLOR_X) & (v <= _TAYLOR_V)) | (
        diff[0] < _CANCEL_RATIO * n_plus[0]
    )
    if np.any(need_taylor):
        idx = need_taylor
        series = _diff_taylor((m[0][idx], m[1][idx]), (delta[0][idx], delta[1][idx]))
        dh, dl = diff
        dh = dh.copy()
        dl = dl.copy()
        dh[idx], dl[idx] = series
        diff = (dh, dl)

    # ln c = -(h^2 + t^2)/2 - ln 2 - x/2 + ln(N+ - N-)
    quad = dd.mul_d(dd.add(dd.sqr(h), dd.sqr(t)), -0.5)
    out = dd.sub(quad, _LN2_DD)
    out = dd.add(out, dd.mul_d(x_dd, -0.5))
    out = dd.add(out, dd.log(diff))
    return out


def black_price_hi_batch(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Normalized OTM Black prices, correctly rounded to double."""
    lnc = log_black_price_hi_batch(x, v)
    with np.errstate(under="ignore"):
        c = dd.exp(lnc)
    return dd.to_double(c)


def black_price_hi(x: float, v: float) -> float:
    """Scalar high-accuracy normalized OTM Black price (x <= 0, v > 0)."""
    if not (x <= 0.0):
        raise ValueError(f"log-moneyness must be <= 0, got {x!r}")
    if not (v > 0.0):
        raise ValueError(f"total volatility must be > 0, got {v!r}")
    return float(black_price_hi_batch(np.array([x]), np.array([v]))[0])


# ---------------------------------------------------------------------------
# Reference inversion: bracketing bisection against the dd price.
# ---------------------------------------------------------------------------

_V_FLOOR = 1e-300  # keeps the bracket clear of the denormal range


def _lnc_double(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Plain double lnc via scipy's erfcx.

    Only used to pre-narrow bisection brackets; the final digits always come
    from the double-double evaluation.  (scipy's erfcx is an implementation
    independent of the solver kernels, so the oracle path shares no code with
    the path it checks.)
    """
    h = x / v
    t = 0.5 * v
    sqrt_half = 0.7071067811865476
    n_plus = scipy.special.erfcx(-(h + t) * sqrt_half)
    n_minus = scipy.special.erfcx(-(h - t) * sqrt_half)
    diff = n_plus - n_minus
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -0.5 * (h * h + t * t) - math.log(2.0) - 0.5 * x + np.log(diff)
    return np.where(diff > 0.0, out, -np.inf)


def _upper_bracket(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Starting upper bound: four times the upper-price asymptotic seed."""
    q = 1.0 - c
    denom = 1.0 + np.exp(-x)
    seed = np.array([-2.0 * norm_cdf_inv(min(max(qi, 1e-300), 0.5)) for qi in np.atleast_1d(q / denom)])
    return np.maximum(4.0 * seed, 1e-4)


def iv_reference_batch(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Vectorized ground-truth inversion of the dd price.

    Bracketing bisection: a log-space double-precision phase narrows the
    bracket to ~1e-13 relative, then linear bisection against the dd price
    runs until the bracket spans at most one ulp of v.  Monotonicity of the
    price in v guarantees correctness.
    """
    x = np.asarray(x, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    if np.any(~np.isfinite(c)) or np.any(c <= 0.0) or np.any(c >= 1.0):
        raise BracketFailure("target price must satisfy 0 < c < 1")
    lnc_t = np.log(c)

    hi = _upper_bracket(x, c)
    # grow until the double price clears the target everywhere
    for _ in range(200):
        short = _lnc_double(x, hi) < lnc_t
        if not np.any(short):
            break
        hi = np.where(short, 2.0 * hi, hi)
    else:
        raise BracketFailure("upper bracket expansion exhausted")

    # phase 1: log-space double bisection
    lo_l = np.full_like(hi, math.log(_V_FLOOR))
    hi_l = np.log(hi)
    for _ in range(64):
        mid = 0.5 * (lo_l + hi_l)
        high = _lnc_double(x, np.exp(mid)) >= lnc_t
        hi_l = np.where(high, mid, hi_l)
        lo_l = np.where(high, lo_l, mid)

    # phase 2: linear dd bisection from a defensively widened bracket
    lo = np.exp(lo_l) * (1.0 - 4e-12)
    hi = np.exp(hi_l) * (1.0 + 4e-12)
    lo = np.maximum(lo, _V_FLOOR)
    lnc_t_dd = dd.log(dd.from_double(c))

    def _above(vv: np.ndarray) -> np.ndarray:
        val = log_black_price_hi_batch(x, vv)
        return dd.to_double(dd.sub(val, lnc_t_dd)) >= 0.0

    # verify enclosure; on failure fall back to the full-width dd bracket
    bad = _above(lo) | ~_above(hi)
    if np.any(bad):
        lo = np.where(bad, _V_FLOOR, lo)
        fallback_hi = _upper_bracket(x, c) * 4.0
        for _ in range(200):
            short = ~_above(fallback_hi) & bad
            if not np.any(short):
                break
            fallback_hi = np.where(short, 2.0 * fallback_hi, fallback_hi)
        hi = np.where(bad, fallback_hi, hi)

    for _ in range(120):
        mid = 0.5 * (lo + hi)
        open_lane = (mid > lo) & (mid < hi)
        if not np.any(open_lane):
            break
        high = _above(mid)
        hi = np.where(open_lane & high, mid, hi)
        lo = np.where(open_lane & ~high, mid, lo)
    return 0.5 * (lo + hi)


def iv_reference(x: float, c: float) -> float:
    """Scalar reference implied total volatility for a normalized price."""
    return float(iv_reference_batch(np.array([x]), np.array([c]))[0])


def ulp_error(v_hat: float, v_ref: float) -> float:
    """|v_hat - v_ref| in units of the double spacing at v_ref."""
    if not (v_ref > 0.0 and math.isfinite(v_ref)):
        raise ValueError(f"v_ref must be positive finite, got {v_ref!r}")
    spacing = math.nextafter(v_ref, math.inf) - v_ref
    return abs(v_hat - v_ref) / spacing
