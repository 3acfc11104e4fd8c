"""
Small-maturity asymptotics of ATM digitals and implied volatility slopes

The link between the two is exact: differentiating C(K) = BS(K, sigma(K)) in
the strike gives the ATM slope in terms of the digital P[S_T >= 1] and the ATM
implied vol. The closed forms below give the small-T limits of the digital
(and hence the slope) per model class.
"""

import logging
import numpy as np
from dataclasses import dataclass
from enum import Enum
from levysmile.util.blackscholes import bs_vega, norm_cdf, norm_pdf
from levysmile.util.errors import (
    DriftNotZero,
    ModelConfigError,
    NotApplicable,
    PriceOutOfBounds,
)
from levysmile.util.fourier import QuadratureConfig, integrate_oscillatory
from levysmile.util.models import (
    ZERO_DRIFT_TOL,
    BlackScholes,
    ProfileKind,
    VarianceGamma,
    Variation,
    asymptotic_profile,
    critical_moments,
    resolve_drift,
)
from math import atan, copysign, exp, fabs, log, pi, sqrt
from scipy.integrate import quad
from scipy.special import betainc

logger = logging.getLogger(__name__)

SQRT_2PI = sqrt(2.0 * pi)


class SlopeOrder(Enum):
    CONSTANT = "Constant"
    INVERSE_SQRT_T = "InverseSqrtT"
    SQRT_T = "SqrtT"


@dataclass(frozen=True)
class SlopeEstimate:
    value: float
    order: SlopeOrder
    formula_id: str


@dataclass(frozen=True)
class DigitalLimit:
    value: float
    case: str


def _require_maturity(T, allow_zero=False):
    if T > 0 or (allow_zero and T == 0):
        return
    raise ModelConfigError("Maturity must be positive (got: {})".format(T))


def _is_zero_drift(b):
    return fabs(b) <= ZERO_DRIFT_TOL


# ----------
# Digital to slope
# ----------


def slope_from_digital(digital, atm_vol, T):
    """
    ATM implied vol slope (per unit log-strike) from the ATM digital price

    Parameters:
    - digital (float): P[S_T >= 1]
    - atm_vol (float): ATM implied volatility
    - T (float): maturity
    """
    _require_maturity(T)
    if not 0 <= digital <= 1:
        raise PriceOutOfBounds("Digital price {} not in [0, 1]".format(digital))

    half_vol = 0.5 * atm_vol * sqrt(T)
    return (norm_cdf(-half_vol) - digital) / (sqrt(T) * norm_pdf(half_vol))


def slope_from_digital_at(digital, vol, k, T):
    """
    Same as `slope_from_digital` at a general log-strike k, using the implied
    vol `vol` at that strike
    """
    _require_maturity(T)
    if not 0 <= digital <= 1:
        raise PriceOutOfBounds("Digital price {} not in [0, 1]".format(digital))

    vol_sqrt_t = vol * sqrt(T)
    d2 = -k / vol_sqrt_t - 0.5 * vol_sqrt_t
    return exp(k) * (norm_cdf(d2) - digital) / bs_vega(vol, k, T)


# ----------
# Digital limits
# ----------


def digital_limit(model):
    """
    Limit of the ATM digital P[X_T >= 0] as T -> 0
    """
    profile = asymptotic_profile(model)
    b = profile.drift_b

    if profile.kind == ProfileKind.JUMP_DIFFUSION:
        return DigitalLimit(0.5, "jump_diffusion")

    if _is_zero_drift(b):
        raise NotApplicable(
            "No digital limit for the pure-jump {} model with zero drift".format(
                model.name
            )
        )

    sign_limit = DigitalLimit(0.5 * (1.0 + copysign(1.0, b)), "drift_sign")
    if profile.variation == Variation.FINITE:
        return sign_limit

    if profile.eta < 1:
        return sign_limit
    if profile.eta == 1:
        return DigitalLimit(0.5 + atan(b / profile.c1) / pi, "arctan")

    return DigitalLimit(0.5, "dominated")


def digital_limit_oracle(profile, b, T, cfg=None):
    """
    Digital probability of a pure power-law process with drift b

        1/2 + sign(b)/pi * int_0^inf exp(-c1 T^(1-eta) (u/|b|)^eta) sin(u)/u du

    which tends to `digital_limit` as T -> 0
    """
    _require_maturity(T)
    if profile.kind != ProfileKind.POWER_LAW:
        raise NotApplicable("The integral oracle needs a power-law profile")
    if b == 0:
        raise NotApplicable("The integral oracle needs a non-zero drift")

    cfg = cfg or QuadratureConfig()
    eta, c1 = profile.eta, profile.c1
    scale = c1 * T ** (1.0 - eta) / fabs(b) ** eta

    def integrand(u):
        return np.exp(-scale * np.power(u, eta)) * np.sinc(u / pi)

    # The first half-period is integrated adaptively as the envelope may be
    # much narrower than pi
    head, head_error = quad(
        lambda u: float(integrand(u)), 0.0, pi, epsabs=0.1 * cfg.abs_tol, limit=200
    )[:2]
    tail = integrate_oscillatory(integrand, cfg, start=pi)
    logger.debug(
        "Oracle integral at eta=%s T=%s: %s half-periods, error %s",
        eta,
        T,
        tail.half_periods_used,
        head_error + tail.error_estimate,
    )

    return 0.5 + copysign(1.0, b) * (head + tail.value) / pi


# ----------
# Expansions
# ----------


def _vg_zero_drift(model, error_cls=NotApplicable):
    if not isinstance(model, VarianceGamma):
        raise NotApplicable("Only defined for the variance gamma model")

    b = resolve_drift(model)
    if not _is_zero_drift(b):
        raise error_cls(
            "Variance gamma drift is {} (needs theta = -sigma_vg^2 / 2)".format(b)
        )

    return critical_moments(model)


def digital_expansion(model, T):
    """
    Second-order small-T expansion of the ATM digital: jump diffusions, and the
    variance gamma model with zero drift
    """
    _require_maturity(T, allow_zero=True)
    profile = asymptotic_profile(model)

    if profile.kind == ProfileKind.JUMP_DIFFUSION:
        return 0.5 + profile.drift_b * sqrt(T) / (profile.sigma * SQRT_2PI)

    if isinstance(model, VarianceGamma) and _is_zero_drift(profile.drift_b):
        s_plus = critical_moments(model).s_plus
        nu = model.nu
        return 0.5 - (T / nu) * log(s_plus * model.sigma * sqrt(0.5 * nu))

    raise NotApplicable(
        "No digital expansion for the {} model (drift {})".format(
            model.name, profile.drift_b
        )
    )


def vg_atm_vol_b0(model, T):
    """
    Leading-order ATM implied vol of the zero-drift variance gamma model
    """
    _require_maturity(T)
    s_plus = _vg_zero_drift(model, DriftNotZero).s_plus
    return SQRT_2PI * sqrt(T) / model.nu * log(s_plus / (s_plus - 1.0))


def vg_atm_call_b0(model, T):
    _require_maturity(T)
    s_plus = _vg_zero_drift(model, DriftNotZero).s_plus
    return (T / model.nu) * log(s_plus / (s_plus - 1.0))


def vg_digital_b0_exact(model, T):
    """
    Exact ATM digital of the zero-drift variance gamma model

    With zero drift X_T is the difference of two independent gamma variables
    with the same shape T / nu and rates s_+ and -s_-, so P[X_T >= 0] is a
    beta tail probability
    """
    _require_maturity(T)
    strip = _vg_zero_drift(model, DriftNotZero)
    shape = T / model.nu
    cut = strip.s_plus / (strip.s_plus - strip.s_minus)
    return float(1.0 - betainc(shape, shape, cut))


# ----------
# ATM slopes
# ----------


def atm_slope_asymptotic(model, T):
    """
    Small-maturity ATM implied vol slope, evaluated at maturity T
    """
    _require_maturity(T)
    if isinstance(model, BlackScholes):
        return SlopeEstimate(0.0, SlopeOrder.CONSTANT, "flat")

    profile = asymptotic_profile(model)
    b = profile.drift_b

    if profile.kind == ProfileKind.JUMP_DIFFUSION:
        # Equals psi(1) / sigma under the martingale drift
        sigma = profile.sigma
        return SlopeEstimate(
            -(b / sigma + 0.5 * sigma), SlopeOrder.CONSTANT, "jump_diffusion"
        )

    if _is_zero_drift(b):
        if isinstance(model, VarianceGamma):
            s_plus = critical_moments(model).s_plus
            nu = model.nu
            level = model.sigma * sqrt(0.5 * nu * s_plus * (s_plus - 1.0))
            value = SQRT_2PI / nu * log(level) * sqrt(T)
            return SlopeEstimate(value, SlopeOrder.SQRT_T, "vg_zero_drift")

        raise NotApplicable(
            "No ATM slope asymptotics for the {} model with zero drift".format(
                model.name
            )
        )

    if profile.variation == Variation.FINITE or profile.eta < 1:
        value = -sqrt(0.5 * pi) * copysign(1.0, b) / sqrt(T)
        return SlopeEstimate(value, SlopeOrder.INVERSE_SQRT_T, "finite_variation")

    if profile.eta == 1:
        value = -sqrt(2.0 / pi) * atan(b / profile.c1) / sqrt(T)
        return SlopeEstimate(value, SlopeOrder.INVERSE_SQRT_T, "arctan")

    raise NotApplicable(
        "No ATM slope asymptotics for power-law exponent {}".format(profile.eta)
    )
