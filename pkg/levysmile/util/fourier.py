"""
Fourier contour integrals for digital and call prices

Both prices are inverse Laplace-type integrals along the vertical line
Re(s) = a, folded onto y >= 0 using the reflection symmetry of the mgf:

    P[X_T >= k] = 1/pi int_0^inf Re[exp(-k s) M(s, T) / s] dy,        0 < a < s_+
    C(k, T)     = 1/pi int_0^inf Re[exp(k (1 - s)) M(s, T) / (s (s - 1))] dy,
                                                                    1 < a < s_+

with s = a + iy. For small T and no Brownian part the integrands decay very
slowly, so the range is split into a head, integrated adaptively panel by
panel, and a tail summed over half-periods of the asymptotic oscillation
exp(i * omega * y) with Wynn's epsilon algorithm on the partial sums. When
there is no such oscillation (omega = 0, e.g. zero-drift variance gamma at
the money) the tail is integrated in log(y) instead.
"""

import logging
import numpy as np
from collections import deque
from dataclasses import dataclass, replace
from levysmile.util.errors import (
    ModelConfigError,
    MomentExplosion,
    NoConvergence,
    NonFiniteValue,
    StripViolation,
)
from levysmile.util.models import critical_moments, exponent, resolve_drift
from math import ceil, exp, expm1, fabs, isfinite, pi
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from typing import Union

logger = logging.getLogger(__name__)

AUTO = "auto"
DIGITAL = "digital"
CALL = "call"

# Pure-jump digitals below this maturity are not attempted
MIN_PURE_JUMP_T = 1e-6

# Tails that do not oscillate are integrated in log(y) over this many
# e-folds past the split point
LOG_TAIL_SPAN = 28.0

# Largest phase omega * y accepted at the far end of a log tail
MAX_LOG_TAIL_PHASE = 1e-3

PANEL_BATCH = 32
GEOMETRIC_RATIO = 10.0
QUAD_LIMIT = 200


@dataclass(frozen=True)
class QuadratureConfig:
    contour_a: Union[str, float] = AUTO
    abs_tol: float = 1e-10
    max_half_periods: int = 10**6
    acceleration_order: int = 8
    panel_rule: int = 16

    def __post_init__(self):
        if isinstance(self.contour_a, str):
            if self.contour_a.lower() != AUTO:
                raise ModelConfigError(
                    "contour_a must be 'auto' or a number (got: '{}')".format(
                        self.contour_a
                    )
                )
            object.__setattr__(self, "contour_a", AUTO)
        elif not isfinite(self.contour_a):
            raise ModelConfigError("contour_a must be finite")

        if not self.abs_tol > 0:
            raise ModelConfigError("abs_tol must be positive")
        if self.max_half_periods < 1:
            raise ModelConfigError("max_half_periods must be at least 1")
        if self.acceleration_order < 1:
            raise ModelConfigError("acceleration_order must be at least 1")
        if self.panel_rule < 2:
            raise ModelConfigError("panel_rule must be at least 2")


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    half_periods_used: int
    accelerated: bool


# ----------
# Sequence acceleration
# ----------


def wynn_epsilon(partial_sums):
    """
    Wynn's epsilon algorithm over a window of partial sums. Returns the
    highest-order even-column estimate that stays finite
    """
    current = np.asarray(partial_sums, dtype=float)
    best = current[-1]
    previous = np.zeros(len(current) + 1)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for column in range(1, len(partial_sums)):
            diff = np.diff(current)
            if np.any(diff == 0):
                break
            following = previous[1 : len(current)] + 1.0 / diff
            if not np.all(np.isfinite(following)):
                break
            previous, current = current, following
            if column % 2 == 0:
                best = current[-1]

    return float(best)


def _accelerated_sum(panel_batches, cfg, start_value=0.0):
    """
    Sum a sequence of panel integrals, returning as soon as either the plain
    partial sums settle or the epsilon-accelerated estimates agree
    """
    window = 2 * cfg.acceleration_order + 1
    tol = cfg.abs_tol
    partial_sums = []
    recent_terms = deque(maxlen=4)
    total = start_value
    last_estimate = None

    for batch in panel_batches:
        for term in batch:
            total += term
            partial_sums.append(total)
            recent_terms.append(fabs(term))

        n = len(partial_sums)
        settled = len(recent_terms) == recent_terms.maxlen
        if settled and max(recent_terms) <= 0.1 * tol:
            return IntegralResult(total, sum(recent_terms), n, False)

        if n > window:
            estimate = wynn_epsilon(partial_sums[-window:])
            previous = wynn_epsilon(partial_sums[-window - 1 : -1])
            error = 10.0 * fabs(estimate - previous)
            if last_estimate is not None:
                error = max(error, 10.0 * fabs(estimate - last_estimate))
            if error <= tol:
                return IntegralResult(estimate, error, n, True)
            last_estimate = estimate

        if n >= cfg.max_half_periods:
            break

    raise NoConvergence(
        "Panel sum did not converge after {} panels".format(len(partial_sums))
    )


def integrate_oscillatory(integrand, cfg, start=0.0):
    """
    Integrate `integrand` over [start, inf), where the integrand oscillates
    with (asymptotic) half-period pi. The integrand must accept numpy arrays

    Each half-period is integrated with a fixed Gauss-Legendre rule, and the
    partial sums are accelerated with Wynn's epsilon algorithm
    """
    nodes, weights = leggauss(cfg.panel_rule)
    offsets = 0.5 * (nodes + 1.0) * pi
    weights = 0.5 * pi * weights

    def batches():
        first = 0
        while first < cfg.max_half_periods:
            count = min(PANEL_BATCH, cfg.max_half_periods - first)
            lefts = start + pi * np.arange(first, first + count)
            u = lefts[:, None] + offsets[None, :]
            values = np.asarray(integrand(u), dtype=float)
            if not np.all(np.isfinite(values)):
                raise NonFiniteValue("Oscillatory integrand is not finite")
            yield values @ weights
            first += count

    return _accelerated_sum(batches(), cfg)


def _quad_panel(integrand, lo, hi, tol):
    result = quad(
        lambda y: float(integrand(np.array([y]))[0]),
        lo,
        hi,
        epsabs=tol,
        epsrel=1e-13,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    value, error = result[0], result[1]
    if not isfinite(value):
        raise NonFiniteValue("Integrand is not finite on [{}, {}]".format(lo, hi))
    return value, error


def _integrate_log_tail(integrand, start, cfg):
    """
    Non-oscillating tail over [start, inf), integrated in t = log(y / start)
    up to t = LOG_TAIL_SPAN. The integrand must decay at least like 1 / y^2,
    so the part beyond the far end is bounded by y |f(y)| there and is
    counted in the error estimate
    """

    def weighted(t):
        y = start * np.exp(t)
        return y * integrand(y)

    value, error = _quad_panel(weighted, 0.0, LOG_TAIL_SPAN, 0.5 * cfg.abs_tol)
    remainder = fabs(float(weighted(np.array([LOG_TAIL_SPAN]))[0]))
    return IntegralResult(value, error + remainder, 0, False)


# ----------
# Pricing integrals
# ----------


def auto_contour(model, kind):
    s_plus = critical_moments(model).s_plus
    if kind == CALL:
        return 1.0 + 0.5 * min(s_plus - 1.0, 19.0)

    return 0.5 * min(s_plus, 20.0)


def _contour(model, kind, cfg):
    s_plus = critical_moments(model).s_plus
    if kind == CALL and s_plus <= 1:
        raise MomentExplosion(
            "Call prices need s_+ > 1 (the {} model has {})".format(model.name, s_plus)
        )

    if cfg.contour_a == AUTO:
        return auto_contour(model, kind)

    a = float(cfg.contour_a)
    lower = 1.0 if kind == CALL else 0.0
    if not lower < a < s_plus:
        raise StripViolation(
            "Contour abscissa {} must lie in ({}, {}) for {} prices".format(
                a, lower, s_plus, kind
            )
        )
    return a


def _head_breakpoints(a, y_split):
    points = [0.0]
    y = max(a, 1.0)
    while y < y_split:
        points.append(y)
        y *= GEOMETRIC_RATIO
    points.append(y_split)
    return points


def _pricing_integral(model, k, T, cfg, kind):
    if not T > 0:
        raise ModelConfigError("Maturity must be positive (got: {})".format(T))

    b = resolve_drift(model)
    sigma = model.brownian_sigma
    if sigma == 0 and T < MIN_PURE_JUMP_T:
        raise NoConvergence(
            "Maturity {} is below the pure-jump limit {}".format(T, MIN_PURE_JUMP_T)
        )

    a = _contour(model, kind, cfg)
    shift = k if kind == CALL else 0.0

    def integrand(y):
        s = a + 1j * np.asarray(y, dtype=float)
        log_value = T * np.asarray(exponent(model, s, b)) - k * s + shift
        with np.errstate(over="ignore", invalid="ignore"):
            value = np.exp(log_value) / s
            if kind == CALL:
                value = value / (s - 1.0)
        return np.real(value)

    # The phase of the integrand grows like omega * y for large y
    omega = fabs(T * (b + sigma**2 * a) - k)
    y_min = 10.0 * max(a, 1.0)
    oscillating = omega * y_min * exp(LOG_TAIL_SPAN) > MAX_LOG_TAIL_PHASE
    if oscillating:
        half_period = pi / omega
        num_head_periods = max(1, ceil(y_min / half_period))
        y_split = num_head_periods * half_period
    else:
        num_head_periods = 0
        y_split = y_min

    # Budget half of the tolerance for the head and half for the tail, in
    # units of the integral before dividing by pi
    int_tol = pi * cfg.abs_tol
    breakpoints = _head_breakpoints(a, y_split)
    panel_tol = 0.5 * int_tol / len(breakpoints)
    head, head_error = 0.0, 0.0
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        value, error = _quad_panel(integrand, lo, hi, panel_tol)
        head += value
        head_error += error

    tail_cfg = replace(cfg, abs_tol=0.5 * int_tol)
    if oscillating:
        tail = integrate_oscillatory(
            lambda u: integrand(u / omega) / omega,
            tail_cfg,
            start=num_head_periods * pi,
        )
    else:
        tail = _integrate_log_tail(integrand, y_split, tail_cfg)

    error = (head_error + tail.error_estimate) / pi
    value = (head + tail.value) / pi
    logger.debug(
        "%s integral for %s at k=%s T=%s: a=%s omega=%s, %d tail panels "
        "(accelerated: %s), error %s",
        kind,
        model.name,
        k,
        T,
        a,
        omega,
        tail.half_periods_used,
        tail.accelerated,
        error,
    )

    if error > cfg.abs_tol:
        raise NoConvergence(
            "{} integral error estimate {} exceeds tolerance {}".format(
                kind, error, cfg.abs_tol
            )
        )

    return IntegralResult(
        value, error, num_head_periods + tail.half_periods_used, tail.accelerated
    )


def digital_integral(model, k, T, cfg=None):
    return _pricing_integral(model, k, T, cfg or QuadratureConfig(), DIGITAL)


def call_integral(model, k, T, cfg=None):
    return _pricing_integral(model, k, T, cfg or QuadratureConfig(), CALL)


def digital_price(model, k, T, cfg=None):
    """
    P[X_T >= k], i.e. the digital call paying 1 if S_T >= exp(k)
    """
    result = digital_integral(model, k, T, cfg)
    return min(max(result.value, 0.0), 1.0)


def call_price(model, k, T, cfg=None):
    """
    Undiscounted call price E[(S_T - exp(k))^+] with S_0 = 1
    """
    result = call_integral(model, k, T, cfg)
    intrinsic = -expm1(k) if k < 0 else 0.0
    return min(max(result.value, intrinsic), 1.0)
