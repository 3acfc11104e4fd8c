"""
Large-strike wing asymptotes from the critical moments, and the equivalence
between the steeper wing and the sign of the small-maturity ATM slope
"""

import logging
import numpy as np
from dataclasses import dataclass
from levysmile.util.asymptotics import atm_slope_asymptotic
from levysmile.util.errors import (
    MomentExplosion,
    NegativeArgument,
    NotApplicable,
    UnboundedMoments,
)
from levysmile.util.models import (
    CGMY,
    NIG,
    ZERO_DRIFT_TOL,
    Meixner,
    VarianceGamma,
    critical_moments,
    resolve_drift,
)
from math import fabs, isinf, sqrt
from typing import Optional

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WingReport:
    psi_right: float
    psi_left: float
    right_asymptote: float
    left_asymptote: float
    right_steeper: bool
    atm_slope_positive: Optional[bool]
    equivalent: Optional[bool]


@dataclass(frozen=True)
class EquivalenceVerdict:
    holds: bool
    right_steeper: bool
    negative_drift: bool
    reduced_condition: bool
    condition: str


def lee_psi(x):
    """
    Psi(x) = 2 - 4 (sqrt(x^2 + x) - x), evaluated as
    2 / (2x + 1 + 2 sqrt(x^2 + x)) to avoid cancellation for large x
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise NegativeArgument("Psi is only defined for x >= 0 (got: {})".format(x))

    with np.errstate(over="ignore", invalid="ignore"):
        values = 2.0 / (2.0 * x_arr + 1.0 + 2.0 * np.sqrt(x_arr * x_arr + x_arr))
    values = np.where(np.isinf(x_arr), 0.0, values)

    if np.ndim(x) == 0:
        return float(values)
    return values


def wing_asymptotes(model, T):
    """
    Lee's moment formula: sigma_imp(k) ~ sqrt(Psi / T) * sqrt(|k|) on each
    wing, with Psi evaluated at s_+ - 1 on the right and at -s_- on the left
    """
    strip = critical_moments(model)
    if isinf(strip.s_plus) or isinf(strip.s_minus):
        raise UnboundedMoments(
            "The {} model has moments of all orders, so its wings are not "
            "determined by the moment formula".format(model.name)
        )
    if strip.s_plus <= 1:
        raise MomentExplosion(
            "The {} model has s_+ = {} <= 1".format(model.name, strip.s_plus)
        )

    psi_right = lee_psi(strip.s_plus - 1.0)
    psi_left = lee_psi(-strip.s_minus)
    right_steeper = psi_right > psi_left

    try:
        atm_slope_positive = atm_slope_asymptotic(model, T).value > 0
    except NotApplicable as e:
        logger.debug("No ATM slope sign for %s: %s", model.name, e)
        atm_slope_positive = None

    return WingReport(
        psi_right=psi_right,
        psi_left=psi_left,
        right_asymptote=sqrt(psi_right / T),
        left_asymptote=sqrt(psi_left / T),
        right_steeper=right_steeper,
        atm_slope_positive=atm_slope_positive,
        equivalent=(
            None
            if atm_slope_positive is None
            else right_steeper == atm_slope_positive
        ),
    )


def wing_curve(report, k):
    """
    Asymptote curves of the report evaluated at log-strikes k
    """
    k_arr = np.asarray(k, dtype=float)
    coeff = np.where(k_arr >= 0, report.right_asymptote, report.left_asymptote)
    values = coeff * np.sqrt(np.abs(k_arr))

    if np.ndim(k) == 0:
        return float(values)
    return values


def _reduced_condition(model):
    if isinstance(model, CGMY):
        return model.M - 1 < model.G, "M - 1 < G"
    if isinstance(model, NIG):
        return model.beta > -0.5, "beta > -1/2"
    if isinstance(model, VarianceGamma):
        return 1 + 2 * model.theta / model.sigma**2 > 0, "1 + 2 theta / sigma^2 > 0"
    if isinstance(model, Meixner):
        return model.a_bar + 2 * model.b_bar > 0, "a_bar + 2 b_bar > 0"

    raise NotApplicable(
        "Steepness equivalence is not defined for the {} model".format(model.name)
    )


def steepness_equivalence(model):
    """
    Check that the right wing is the steeper one exactly when the martingale
    drift is negative, i.e. when the small-maturity ATM slope is positive
    """
    reduced, condition = _reduced_condition(model)
    if not model.is_martingale:
        raise NotApplicable("Steepness equivalence needs the martingale drift")

    b = resolve_drift(model)
    if fabs(b) <= ZERO_DRIFT_TOL:
        raise NotApplicable(
            "Steepness equivalence is not defined at zero drift ({})".format(b)
        )

    strip = critical_moments(model)
    right_steeper = strip.s_plus - 1 < -strip.s_minus
    negative_drift = b < 0

    return EquivalenceVerdict(
        holds=right_steeper == negative_drift,
        right_steeper=right_steeper,
        negative_drift=negative_drift,
        reduced_condition=reduced,
        condition=condition,
    )
