"""
Self-contained numerical acceptance checks, run by the `verify` task

Every check is a function returning (passed, detail); `run_acceptance` times
them and never lets a failure in one check stop the others.
"""

import logging
import numpy as np
from dataclasses import dataclass
from levysmile.util.asymptotics import (
    atm_slope_asymptotic,
    digital_expansion,
    digital_limit_oracle,
    vg_atm_call_b0,
)
from levysmile.util.blackscholes import (
    bs_call,
    bs_digital,
    bs_vega,
    implied_vol,
    norm_cdf,
)
from levysmile.util.errors import LevySmileError
from levysmile.util.fourier import QuadratureConfig, call_price, digital_price
from levysmile.util.lee import steepness_equivalence, wing_asymptotes
from levysmile.util.models import (
    CGMY,
    NIG,
    ZERO_DRIFT_TOL,
    AsymptoticProfile,
    Meixner,
    ProfileKind,
    VarianceGamma,
    Variation,
    psi,
    resolve_drift,
)
from levysmile.util.presets import get_preset
from levysmile.util.smile import atm_slope_fd, figure_report
from math import atan, exp, expm1, log, pi, sqrt
from time import time

logger = logging.getLogger(__name__)

DEFAULT_SEED = 1234
NUM_RANDOM_MODELS = 1000
NUM_ROUND_TRIPS = 10000

ROUND_TRIP_TOL = 1e-9

# Round trips whose price moves by less than this many rounding errors over
# the vol tolerance are skipped
ROUND_TRIP_MARGIN = 1e3
EPS = float(np.finfo(float).eps)

# Drifts this close to zero are skipped by the random equivalence draws
EQUIVALENCE_MIN_DRIFT = 1e-10

# -sqrt(2/pi) arctan(b / delta) / sqrt(T) for the NIG figure model at T = 0.1
NIG_TANGENT_SLOPE = 0.754712


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float


def check_bs_oracle():
    model = get_preset("blackscholes")
    worst = 0.0
    for T in [0.01, 0.1, 1.0]:
        for k in [-0.2, 0.0, 0.2]:
            worst = max(
                worst,
                abs(digital_price(model, k, T) - bs_digital(model.sigma, k, T)),
                abs(call_price(model, k, T) - bs_call(model.sigma, k, T)),
            )

    return worst < 1e-8, "max abs error {:.3g}".format(worst)


def check_kou_constant():
    model = get_preset("kou")
    value = psi(model, 1.0).real / model.sigma
    return abs(value - (-0.65498)) < 1e-4, "psi(1)/sigma = {:.6f}".format(value)


def check_nig_drift():
    b = resolve_drift(get_preset("nig"))
    return abs(b - (-0.339206)) < 1e-6, "b = {:.7f}".format(b)


def check_merton_second_order():
    model = get_preset("merton")
    maturities = np.array([1e-2, 3e-3, 1e-3, 3e-4, 1e-4])
    scaled = np.array(
        [(digital_price(model, 0.0, T) - 0.5) / sqrt(T) for T in maturities]
    )

    # Fit c0 + c1 sqrt(T) log(1/T) + c2 sqrt(T) and keep the constant term
    root_t = np.sqrt(maturities)
    basis = np.column_stack(
        [np.ones_like(maturities), root_t * np.log(1.0 / maturities), root_t]
    )
    coeffs = np.linalg.lstsq(basis, scaled, rcond=None)[0]

    expected = resolve_drift(model) / (model.sigma * sqrt(2.0 * pi))
    rel_error = abs(coeffs[0] - expected) / abs(expected)
    return rel_error < 0.02, "coefficient {:.6f} vs {:.6f}".format(
        coeffs[0], expected
    )


def check_arctan_limits():
    nig = get_preset("nig")
    meixner = get_preset("meixner")
    nig_digital = digital_price(nig, 0.0, 1e-4)

    b = resolve_drift(meixner)
    meixner_limit = 0.5 + atan(b / (meixner.a_bar * meixner.d_bar)) / pi
    meixner_digital = digital_price(meixner, 0.0, 1e-4)

    passed = (
        abs(nig_digital - 0.40475) < 5e-3
        and abs(meixner_digital - meixner_limit) < 5e-3
    )
    return passed, "NIG {:.5f}, Meixner {:.5f} (limit {:.5f})".format(
        nig_digital, meixner_digital, meixner_limit
    )


def check_cgmy_decreasing():
    model = get_preset("cgmy")
    digitals = [digital_price(model, 0.0, T) for T in [1e-2, 1e-3, 1e-4]]
    decreasing = all(a > b for a, b in zip(digitals, digitals[1:]))
    passed = decreasing and digitals[-1] < 0.15
    return passed, "digitals {}".format(", ".join("{:.5f}".format(d) for d in digitals))


def check_oracle():
    b, c1 = -0.339206, 1.1
    arctan_profile = AsymptoticProfile(
        ProfileKind.POWER_LAW, b, Variation.INFINITE, eta=1.0, c1=c1
    )
    arctan_value = digital_limit_oracle(arctan_profile, b, 0.1)
    arctan_error = abs(arctan_value - (0.5 + atan(b / c1) / pi))

    sqrt_profile = AsymptoticProfile(
        ProfileKind.POWER_LAW, 1.0, Variation.FINITE, eta=0.5, c1=1.0
    )
    sqrt_value = digital_limit_oracle(sqrt_profile, 1.0, 1e-8)

    passed = arctan_error < 1e-6 and abs(sqrt_value - 1.0) < 1e-2
    return passed, "arctan error {:.3g}, eta=0.5 value {:.5f}".format(
        arctan_error, sqrt_value
    )


def check_vg_zero_drift():
    model = get_preset("vg")
    maturities = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
    residuals = [
        abs(digital_price(model, 0.0, T) - digital_expansion(model, T))
        for T in maturities
    ]
    ratios = [a / b for a, b in zip(residuals, residuals[1:])]

    T = 1e-3
    call = call_price(model, 0.0, T)
    leading = vg_atm_call_b0(model, T)
    call_error = abs(call - leading) / leading

    passed = all(2.5 <= r <= 6 for r in ratios) and call_error < 0.05
    return passed, "residual ratios {}, call rel. error {:.3g}".format(
        ", ".join("{:.2f}".format(r) for r in ratios), call_error
    )


def check_digital_identity():
    cfg = QuadratureConfig(abs_tol=1e-11)
    step = 1e-4
    worst = 0.0
    for name in ["nig", "kou"]:
        model = get_preset(name)
        up = call_price(model, log(1.0 + step), 0.1, cfg)
        down = call_price(model, log(1.0 - step), 0.1, cfg)
        dcall_dstrike = (up - down) / (2.0 * step)
        worst = max(worst, abs(dcall_dstrike + digital_price(model, 0.0, 0.1, cfg)))

    return worst < 1e-6, "max |dC/dK + P| = {:.3g}".format(worst)


def random_model(name, rng):
    """
    Draw a random valid model of the given family with a martingale drift
    """
    if name == "cgmy":
        return CGMY(
            C=rng.uniform(0.1, 2.0),
            G=rng.uniform(0.5, 20.0),
            M=rng.uniform(1.05, 20.0),
            Y=rng.uniform(0.05, 0.95),
        )
    if name == "vg":
        sigma = rng.uniform(0.05, 0.6)
        nu = rng.uniform(0.05, 1.0)
        # Keep s_+ > 1, i.e. 1 - theta nu - sigma^2 nu / 2 > 0
        theta_max = (1.0 - 0.5 * sigma**2 * nu) / nu
        theta = rng.uniform(-0.5, min(0.5, 0.99 * theta_max))
        return VarianceGamma(sigma=sigma, nu=nu, theta=theta)
    if name == "nig":
        alpha = rng.uniform(1.0, 20.0)
        beta = rng.uniform(-alpha + 0.01, alpha - 1.01)
        return NIG(alpha=alpha, beta=beta, delta=rng.uniform(0.1, 2.0))
    if name == "meixner":
        b_bar = rng.uniform(-pi + 0.01, pi - 0.01)
        a_bar = rng.uniform(0.01, 0.99) * (pi - b_bar)
        return Meixner(a_bar=a_bar, b_bar=b_bar, d_bar=rng.uniform(0.1, 2.0))

    raise ValueError("No random draws for model '{}'".format(name))


def check_steepness_equivalence(seed=DEFAULT_SEED, count=NUM_RANDOM_MODELS):
    rng = np.random.default_rng(seed)
    violations, checked = 0, 0
    for name in ["cgmy", "vg", "nig", "meixner"]:
        for _ in range(count):
            model = random_model(name, rng)
            if abs(resolve_drift(model)) <= max(EQUIVALENCE_MIN_DRIFT, ZERO_DRIFT_TOL):
                continue
            checked += 1
            if not steepness_equivalence(model).holds:
                violations += 1
                logger.warning("Steepness equivalence fails for %s", model)

    return violations == 0, "{} violations in {} draws".format(violations, checked)


def check_figures():
    nig = get_preset("nig")
    kou = get_preset("kou")
    grid = [-0.1, -0.05, 0.0, 0.05, 0.1]

    nig_figure = figure_report(nig, 0.1, grid)
    nig_ok = (
        nig_figure.fd_slope is not None
        and nig_figure.fd_slope > 0
        and abs(nig_figure.atm_tangent.slope - NIG_TANGENT_SLOPE) < 1e-4
    )

    kou_fd = atm_slope_fd(kou, 0.005)
    kou_tangent = atm_slope_asymptotic(kou, 0.005).value
    kou_wings = wing_asymptotes(kou, 0.005)
    kou_ok = (
        kou_fd < 0
        and abs(kou_tangent - (-0.65498)) < 1e-4
        and kou_wings.right_steeper
        and kou_wings.atm_slope_positive is False
    )

    return nig_ok and kou_ok, "NIG fd {:.4f} tangent {:.6f}, Kou fd {:.4f}".format(
        nig_figure.fd_slope or float("nan"),
        nig_figure.atm_tangent.slope,
        kou_fd,
    )


def round_trip_resolvable(sigma, k, T, tol=ROUND_TRIP_TOL):
    """
    Whether a call price pins its vol down to `tol`: the price change vega * tol
    must clear the rounding error of the largest term the price is built from,
    N(d1) at or above the forward and intrinsic + exp(k) N(-d2) below it
    """
    vol = sigma * sqrt(T)
    d2 = (-k - 0.5 * vol * vol) / vol
    if k >= 0:
        scale = norm_cdf(d2 + vol)
    else:
        scale = -expm1(k) + exp(k) * norm_cdf(-d2)

    return bs_vega(sigma, k, T) * tol > ROUND_TRIP_MARGIN * EPS * scale


def check_round_trips(seed=DEFAULT_SEED, count=NUM_ROUND_TRIPS):
    rng = np.random.default_rng(seed)
    worst, skipped = 0.0, 0
    for _ in range(count):
        sigma = exp(rng.uniform(log(0.01), log(2.0)))
        k = rng.uniform(-1.0, 1.0)
        T = exp(rng.uniform(log(1e-4), log(10.0)))
        if not round_trip_resolvable(sigma, k, T):
            skipped += 1
            continue

        quote = implied_vol(bs_call(sigma, k, T), k, T)
        worst = max(worst, abs(quote.sigma - sigma))

    detail = "max vol error {:.3g}, {} of {} draws skipped".format(
        worst, skipped, count
    )
    return worst < ROUND_TRIP_TOL, detail


CRITERIA = [
    ("Black-Scholes oracle", check_bs_oracle),
    ("Kou psi(1)/sigma", check_kou_constant),
    ("NIG martingale drift", check_nig_drift),
    ("Merton second-order digital", check_merton_second_order),
    ("Arctan digital limits (NIG, Meixner)", check_arctan_limits),
    ("CGMY digitals decrease to 0", check_cgmy_decreasing),
    ("Digital limit integral oracle", check_oracle),
    ("Variance gamma zero drift", check_vg_zero_drift),
    ("Call strike derivative is minus the digital", check_digital_identity),
    ("Steepness equivalence", check_steepness_equivalence),
    ("Figure datasets", check_figures),
    ("Implied vol round trips", check_round_trips),
]


def run_acceptance(numbers=None):
    """
    Run the acceptance checks (all, or the given 1-based numbers) and return
    one CriterionResult per check
    """
    results = []
    for number, (name, check) in enumerate(CRITERIA, start=1):
        if numbers and number not in numbers:
            continue

        start = time()
        try:
            passed, detail = check()
        except LevySmileError as e:
            passed, detail = False, "{}: {}".format(type(e).__name__, e)
        seconds = time() - start

        logger.info("Criterion %d (%s): %s", number, name, passed)
        results.append(CriterionResult(number, name, bool(passed), detail, seconds))

    return results
