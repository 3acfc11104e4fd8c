"""
Black-Scholes primitives with S_0 = 1 and zero rates, parameterised by
log-strike k = log K
"""

import logging
import numpy as np
from dataclasses import dataclass
from levysmile.util.errors import NoConvergence, PriceOutOfBounds
from math import exp, expm1, fabs, log, pi, sqrt
from scipy.special import ndtr

logger = logging.getLogger(__name__)

VOL_LOWER = 1e-10
VOL_UPPER = 10.0
VOL_UPPER_MAX = 1e4
MAX_ITERATIONS = 200

# Call prices below the strike are intrinsic + put, and the put is lost to
# rounding below this many ulps of 1
BOUND_ULPS = 4.0

# Largest double below the forward bound
PRICE_UPPER = float(np.nextafter(1.0, 0.0))

INV_SQRT_2PI = 1.0 / sqrt(2.0 * pi)


@dataclass(frozen=True)
class VolQuote:
    sigma: float
    iterations: int
    residual: float


def norm_cdf(x):
    return float(ndtr(x))


def norm_pdf(x):
    return INV_SQRT_2PI * exp(-0.5 * x * x)


def _d1_d2(sigma, k, T):
    vol = sigma * sqrt(T)
    d1 = (-k + 0.5 * vol * vol) / vol
    return d1, d1 - vol


def _otm_price(sigma, k, T):
    """
    Out-of-the-money option value: the call for k >= 0, the put otherwise
    """
    if sigma <= 0:
        return 0.0

    d1, d2 = _d1_d2(sigma, k, T)
    if k >= 0:
        return max(norm_cdf(d1) - exp(k) * norm_cdf(d2), 0.0)

    return max(exp(k) * norm_cdf(-d2) - norm_cdf(-d1), 0.0)


def _intrinsic(k):
    return -expm1(k) if k < 0 else 0.0


def bs_call(sigma, k, T):
    """
    Undiscounted Black-Scholes call price with forward 1 and strike exp(k),
    strictly below the forward
    """
    return min(_intrinsic(k) + _otm_price(sigma, k, T), PRICE_UPPER)


def bs_digital(sigma, k, T):
    """
    Black-Scholes probability P[S_T >= exp(k)] = Phi(d2)
    """
    if sigma <= 0:
        if k < 0:
            return 1.0
        return 0.5 if k == 0 else 0.0

    _, d2 = _d1_d2(sigma, k, T)
    return norm_cdf(d2)


def bs_vega(sigma, k, T):
    d1, _ = _d1_d2(sigma, k, T)
    return norm_pdf(d1) * sqrt(T)


def implied_vol(price, k, T):
    """
    Invert the Black-Scholes call price for its volatility

    Newton's method on the log of the out-of-the-money price, safeguarded by
    a bisection bracket. Returns a VolQuote with the iteration count and the
    final price residual.
    """
    if not T > 0:
        raise PriceOutOfBounds("Maturity must be positive (got: {})".format(T))

    if not price < 1.0:
        raise PriceOutOfBounds(
            "Call price {} is at or above the forward bound 1".format(price)
        )

    intrinsic = _intrinsic(k)
    target = price - intrinsic
    bound_tol = BOUND_ULPS * np.finfo(float).eps if k < 0 else 0.0
    if target < -bound_tol:
        raise PriceOutOfBounds(
            "Call price {} is below the intrinsic value {}".format(price, intrinsic)
        )

    if target <= bound_tol:
        # Within rounding of the intrinsic value: report the smallest vol
        residual = fabs(bs_call(VOL_LOWER, k, T) - price)
        return VolQuote(VOL_LOWER, 0, residual)

    lo, hi = VOL_LOWER, VOL_UPPER
    while _otm_price(hi, k, T) < target:
        hi *= 2.0
        if hi > VOL_UPPER_MAX:
            raise PriceOutOfBounds(
                "Call price {} is too close to the forward bound".format(price)
            )

    if k == 0:
        sigma = sqrt(2.0 * pi / T) * price
    else:
        # Vega is maximal in sigma at sigma^2 T / 2 = |k|
        sigma = sqrt(2.0 * fabs(k) / T)
    sigma = min(max(sigma, lo), hi)

    log_target = log(target)
    for iteration in range(1, MAX_ITERATIONS + 1):
        otm = _otm_price(sigma, k, T)
        if otm > 0:
            gap = log(otm) - log_target
        else:
            gap = -np.inf

        if gap == 0 or (otm > 0 and fabs(otm - target) <= 1e-15 * target):
            break

        if gap > 0:
            hi = sigma
        else:
            lo = sigma

        step = None
        vega = bs_vega(sigma, k, T)
        if otm > 0 and vega > 0:
            # d log(price) / d sigma = vega / price
            step = gap * otm / vega
        new_sigma = sigma - step if step is not None else None

        if new_sigma is None or not lo < new_sigma < hi:
            new_sigma = 0.5 * (lo + hi)

        step_done = fabs(new_sigma - sigma) <= 4e-16 * max(1.0, sigma)
        if step_done or hi - lo <= 4e-16 * hi:
            sigma = new_sigma
            break

        sigma = new_sigma
    else:
        raise NoConvergence(
            "Implied vol inversion did not converge after {} iterations "
            "(price={}, k={}, T={})".format(MAX_ITERATIONS, price, k, T)
        )

    residual = fabs(bs_call(sigma, k, T) - price)
    logger.debug(
        "Inverted price %s at k=%s T=%s: sigma=%s (%d iterations)",
        price,
        k,
        T,
        sigma,
        iteration,
    )
    return VolQuote(sigma, iteration, residual)
