"""Initial-guess formulas and the first-match dispatch that selects one.

The hot path picks among: a guarded microscopic-price branch, a bivariate
degree-(3,3) rational (fitted over |x| < 3, 0.0005 < c < 0.9995), a
near-ATM small-price seed, an upper-price complementary seed, a deep-OTM
asymptotic from the tail expansion of the Black formula, and a sqrt(2|x|)
fallback.  Dispatch order is fixed; permuting the guards changes results.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from importlib import resources

from .errors import DomainViolation, GuardViolation
from .kernels import norm_cdf_inv
from .quotes import NormalizedQuote

__all__ = [
    "GuessBranch",
    "LiCoefficients",
    "load_li_coefficients",
    "default_li_coefficients",
    "li_guess",
    "asym_otm_guess",
    "near_atm_small_price_guess",
    "upper_price_seed",
    "fallback_guess",
    "dispatch_guess",
    "SEED_FLOOR",
    "UPPER_GUARD",
]

SEED_FLOOR = 1e-10
#: High-price trigger: the representable double immediately below 0.99, so a
#: one-ulp-rounded boundary price still routes to the complementary branch.
UPPER_GUARD = math.nextafter(0.99, 0.0)

_LN_2PI = 1.8378770664093456

# Rational-guess fitted domain.
LI_X_MAX = 3.0
LI_C_MIN = 0.0005
LI_C_MAX = 0.9995


class GuessBranch(enum.Enum):
    BACHELIER_LIMIT = "bachelier_limit"
    LI_RATIONAL = "li_rational"
    NEAR_ATM_SMALL_PRICE = "near_atm_small_price"
    UPPER_PRICE = "upper_price"
    ASYMPTOTIC_OTM = "asymptotic_otm"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class LiCoefficients:
    """20 coefficients of the degree-(3,3) bivariate rational guess.

    Order within each half: x^i c^j for (i,j) = (0,0), (0,1), (0,2), (0,3),
    (1,0), (1,1), (1,2), (2,0), (2,1), (3,0); the denominator constant is
    normalized to 1.
    """

    m: tuple
    n: tuple

    def __post_init__(self):
        if len(self.m) != 10 or len(self.n) != 10:
            raise ValueError("expected 10 numerator and 10 denominator coefficients")


_POWERS = ((0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 0))


def load_li_coefficients(text: str) -> LiCoefficients:
    """Parse the 20-value fixture (numerator first; '#' starts a comment)."""
    values = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            values.append(float(line))
    if len(values) != 20:
        raise ValueError(f"expected 20 coefficient values, got {len(values)}")
    return LiCoefficients(m=tuple(values[:10]), n=tuple(values[10:]))


_DEFAULT_LI = None


def default_li_coefficients() -> LiCoefficients:
    global _DEFAULT_LI
    if _DEFAULT_LI is None:
        text = resources.files("flashiv.data").joinpath("li_coefficients.txt").read_text()
        _DEFAULT_LI = load_li_coefficients(text)
    return _DEFAULT_LI


def _eval_poly(coeffs: tuple, x: float, c: float) -> float:
    acc = 0.0
    for (i, j), a in zip(_POWERS, coeffs):
        acc += a * x**i * c**j
    return acc


def li_guess(x: float, c: float, coeffs: LiCoefficients | None = None) -> float:
    """Rational initial guess on |x| < 3, 0.0005 < c < 0.9995.

    Raises DomainViolation outside the fitted domain (the dispatch makes
    that unreachable on the hot path).
    """
    if not (abs(x) < LI_X_MAX and LI_C_MIN < c < LI_C_MAX):
        raise DomainViolation(f"(x={x!r}, c={c!r}) outside the rational-guess domain")
    if coeffs is None:
        coeffs = default_li_coefficients()
    num = _eval_poly(coeffs.m, x, c)
    den = _eval_poly(coeffs.n, x, c)
    return num / den


def asym_otm_guess(x: float, lnc: float) -> float:
    """Deep-OTM seed v0 = -2x / (D + sqrt(D^2 - 2x)), D = sqrt(-2 ln c - ln 2 pi).

    The rationalized form avoids cancellation when |x| << D^2.  Guard:
    ln c < -2 (and c <= 0.5), below which the tail asymptotics dominate;
    accuracy improves monotonically as c -> 0.
    """
    if lnc >= -2.0:
        raise GuardViolation(f"asymptotic OTM seed requires ln c < -2, got {lnc!r}")
    d_sq = -2.0 * lnc - _LN_2PI
    d = math.sqrt(d_sq)
    return -2.0 * x / (d + math.sqrt(d_sq - 2.0 * x))


def near_atm_small_price_guess(x: float, c: float) -> float:
    """Seed v0 = sqrt(x^2 + 2 pi c^2) for c <= 0.0005, |x| < 0.01.

    Reduces to the first-order ATM relation c ~ v / sqrt(2 pi) at x = 0.
    """
    return math.sqrt(x * x + 2.0 * math.pi * c * c)


def upper_price_seed(x: float, q: float) -> float:
    """High-price seed from 1 - c ~ (1 + e^{-x}) Phi(-v/2) at large v.

    v0 = -2 PhiInv(q / (1 + e^{-x})); exact at x = 0.
    """
    p = q / (1.0 + math.exp(-x))
    p = min(max(p, 1e-300), 0.5)
    return -2.0 * norm_cdf_inv(p)


def fallback_guess(x: float) -> float:
    """sqrt(2|x|), the total volatility at which d1 = 0, floored at 1e-10."""
    return max(math.sqrt(2.0 * abs(x)), SEED_FLOOR)


def dispatch_guess(q: NormalizedQuote) -> tuple[float, GuessBranch]:
    """Select the seed branch with first-match semantics and return
    (v0, branch); v0 carries the 1e-10 floor.

    Order: (i) microscopic Bachelier-limit box, (ii) rational, (iii) near-ATM
    small price, (iv) upper price, (v) asymptotic OTM, (vi) fallback.  For
    the Bachelier branch the returned v0 is only a diagnostic scale; the
    solver's guarded handler computes the actual volatility.
    """
    x, c = q.x, q.c
    if c <= 1e-6 and abs(x) <= 1e-8:
        v0 = near_atm_small_price_guess(x, c)
        branch = GuessBranch.BACHELIER_LIMIT
    elif abs(x) < LI_X_MAX and LI_C_MIN < c < UPPER_GUARD:
        v0 = li_guess(x, c)
        branch = GuessBranch.LI_RATIONAL
    elif c <= LI_C_MIN and abs(x) < 0.01:
        v0 = near_atm_small_price_guess(x, c)
        branch = GuessBranch.NEAR_ATM_SMALL_PRICE
    elif c >= UPPER_GUARD:
        v0 = max(fallback_guess(x), upper_price_seed(x, 1.0 - c))
        branch = GuessBranch.UPPER_PRICE
    elif c <= 0.5 and q.lnc < -2.0:
        v0 = asym_otm_guess(x, q.lnc)
        branch = GuessBranch.ASYMPTOTIC_OTM
    else:
        v0 = fallback_guess(x)
        branch = GuessBranch.FALLBACK
    return max(v0, SEED_FLOOR), branch
