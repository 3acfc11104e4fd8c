"""
Implied volatility smiles from Fourier call prices, finite-difference ATM
slopes, and the datasets behind smile figures (smile, ATM tangent line and
Lee wing asymptotes)
"""

import csv
import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from levysmile.util.asymptotics import (
    atm_slope_asymptotic,
    digital_limit,
    slope_from_digital,
)
from levysmile.util.blackscholes import bs_vega, implied_vol
from levysmile.util.env import get_num_threads
from levysmile.util.errors import (
    AllPointsFailed,
    ModelConfigError,
    NoConvergence,
    NonFiniteValue,
    NotApplicable,
    PriceOutOfBounds,
    StepTooSmall,
    UnboundedMoments,
)
from levysmile.util.fourier import (
    QuadratureConfig,
    call_integral,
    call_price,
    digital_price,
)
from levysmile.util.lee import WingReport, wing_asymptotes, wing_curve
from levysmile.util.models import model_to_dict
from levysmile.util.version import get_version
from math import expm1, fabs, isnan, nan
from os import makedirs
from os.path import join
from typing import List, Optional

logger = logging.getLogger(__name__)

DEFAULT_FD_STEP = 1e-3
MAX_FD_STEP = 1e-2

# Noise floor below which a finite-difference slope is always accepted
MIN_SLOPE_NOISE = 1e-6

CSV_COLUMNS = ["k", "sigma", "price", "residual"]
CSV_FLOAT_FORMAT = "%.17g"

CSV_FORMAT = "csv"
JSON_FORMAT = "json"
OUTPUT_FORMATS = [CSV_FORMAT, JSON_FORMAT]

GRID_NOTE = (
    "Log-strike grid is a reconstruction: k in [-0.5, 0.5] for the Kou "
    "figure and [-0.6, 0.6] for the NIG figure"
)

# Per-point failures that leave the rest of the smile usable
POINT_ERRORS = (NoConvergence, NonFiniteValue, PriceOutOfBounds)


@dataclass(frozen=True)
class SmilePoint:
    k: float
    sigma: float
    price: float
    inversion_residual: float
    error: Optional[str] = None

    @property
    def ok(self):
        return self.error is None


@dataclass(frozen=True)
class AtmTangent:
    intercept: float
    slope: float
    order: str
    formula_id: str

    def at(self, k):
        return self.intercept + self.slope * k


@dataclass
class FigureDataset:
    T: float
    points: List[SmilePoint]
    atm_tangent: AtmTangent
    lee_lines: Optional[WingReport]
    fd_slope: Optional[float]
    metadata: dict = field(default_factory=dict)


def _smile_point(model, k, T, cfg):
    try:
        price = call_price(model, k, T, cfg)
        quote = implied_vol(price, k, T)
    except POINT_ERRORS as e:
        logger.warning("Smile point k=%s T=%s failed: %s", k, T, e)
        return SmilePoint(k, nan, nan, nan, error=str(e))

    return SmilePoint(k, quote.sigma, price, quote.residual)


def build_smile(model, T, grid, cfg=None):
    """
    Price calls on the log-strike grid and invert them for implied vols

    Points are priced concurrently; the result follows the grid order. Points
    that fail to price or invert are kept with a NaN vol and an error message
    """
    cfg = cfg or QuadratureConfig()
    grid = [float(k) for k in grid]
    if not grid:
        raise AllPointsFailed("Empty log-strike grid")

    with ThreadPoolExecutor(max_workers=get_num_threads()) as pool:
        points = list(pool.map(lambda k: _smile_point(model, k, T, cfg), grid))

    num_failed = sum(not p.ok for p in points)
    if num_failed == len(points):
        raise AllPointsFailed(
            "None of the {} smile points for the {} model at T={} inverted".format(
                len(points), model.name, T
            )
        )
    if num_failed:
        logger.info("%d of %d smile points failed at T=%s", num_failed, len(points), T)

    return points


def _vol_and_noise(model, k, T, cfg):
    """
    Implied vol at k, and the vol uncertainty from the quadrature error and
    the inversion residual
    """
    result = call_integral(model, k, T, cfg)
    intrinsic = -expm1(k) if k < 0 else 0.0
    price = min(max(result.value, intrinsic), 1.0)
    quote = implied_vol(price, k, T)
    noise = (result.error_estimate + quote.residual) / bs_vega(quote.sigma, k, T)
    return quote.sigma, noise


def atm_slope_fd(model, T, h=DEFAULT_FD_STEP, cfg=None, max_h=MAX_FD_STEP):
    """
    Central difference (sigma(h) - sigma(-h)) / 2h of the implied vol at the
    money. The step doubles while pricing noise swamps the difference, up to
    `max_h`

    Parameters:
    - model (LevyModel): the model to price with
    - T (float): maturity
    - h (float): initial log-strike step
    - cfg (QuadratureConfig): quadrature settings
    - max_h (float): largest step to try
    """
    if not h > 0:
        raise StepTooSmall("Finite-difference step must be positive")

    cfg = cfg or QuadratureConfig()
    while True:
        vol_up, noise_up = _vol_and_noise(model, h, T, cfg)
        vol_down, noise_down = _vol_and_noise(model, -h, T, cfg)

        slope = (vol_up - vol_down) / (2.0 * h)
        noise = (noise_up + noise_down) / (2.0 * h)
        if noise <= MIN_SLOPE_NOISE or noise <= fabs(slope):
            logger.debug("ATM fd slope at T=%s with h=%s: %s", T, h, slope)
            return slope

        if 2.0 * h > max_h:
            raise StepTooSmall(
                "Pricing noise {} exceeds the slope {} at step {}".format(
                    noise, slope, h
                )
            )

        logger.debug("Slope noise %s exceeds %s at h=%s, doubling", noise, slope, h)
        h *= 2.0


def _cfg_digest(cfg):
    payload = json.dumps(asdict(cfg), sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def figure_report(model, T, grid, cfg=None, fd_step=DEFAULT_FD_STEP):
    """
    Smile at maturity T with its asymptotic ATM tangent line and Lee wing
    asymptotes
    """
    cfg = cfg or QuadratureConfig()
    notes = [GRID_NOTE]

    points = build_smile(model, T, grid, cfg)

    # Anchor the tangent on a direct inversion at the money
    atm_vol = implied_vol(call_price(model, 0.0, T, cfg), 0.0, T).sigma
    slope = atm_slope_asymptotic(model, T)
    tangent = AtmTangent(atm_vol, slope.value, slope.order.value, slope.formula_id)

    try:
        lee_lines = wing_asymptotes(model, T)
    except UnboundedMoments as e:
        lee_lines = None
        notes.append("No Lee asymptotes: {}".format(e))

    try:
        fd_slope = atm_slope_fd(model, T, fd_step, cfg)
    except (StepTooSmall, NoConvergence, NonFiniteValue, PriceOutOfBounds) as e:
        fd_slope = None
        notes.append("No finite-difference slope: {}".format(e))

    metadata = {
        "model": model_to_dict(model),
        "T": T,
        "quadrature": asdict(cfg),
        "cfg_digest": _cfg_digest(cfg),
        "version": get_version(),
        "notes": notes,
    }

    return FigureDataset(T, points, tangent, lee_lines, fd_slope, metadata)


def _format_float(value):
    return CSV_FLOAT_FORMAT % value


def _json_float(value):
    if value is None or isnan(value):
        return None
    return value


def dataset_to_dict(dataset):
    lee = None
    if dataset.lee_lines is not None:
        report = dataset.lee_lines
        lee = asdict(report)
        lee["right_curve"] = [
            wing_curve(report, p.k) if p.k >= 0 else None for p in dataset.points
        ]
        lee["left_curve"] = [
            wing_curve(report, p.k) if p.k <= 0 else None for p in dataset.points
        ]

    return {
        "T": dataset.T,
        "atm_tangent": asdict(dataset.atm_tangent),
        "lee_lines": lee,
        "fd_slope": _json_float(dataset.fd_slope),
        "failed_points": [
            {"k": p.k, "error": p.error} for p in dataset.points if not p.ok
        ],
        "metadata": dataset.metadata,
    }


def write_dataset(dataset, out_dir, stem, fmt=CSV_FORMAT):
    """
    Write the smile as CSV (columns k, sigma, price, residual) and everything
    else as a JSON sidecar, or everything as a single JSON file. Returns the
    written paths
    """
    if fmt not in OUTPUT_FORMATS:
        raise ModelConfigError(
            "Unrecognised output format '{}', must be one in: {}".format(
                fmt, OUTPUT_FORMATS
            )
        )

    makedirs(out_dir, exist_ok=True)
    json_path = join(out_dir, "{}.json".format(stem))
    if fmt == JSON_FORMAT:
        payload = dataset_to_dict(dataset)
        payload["points"] = [
            {
                "k": p.k,
                "sigma": _json_float(p.sigma),
                "price": _json_float(p.price),
                "residual": _json_float(p.inversion_residual),
            }
            for p in dataset.points
        ]
        with open(json_path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

        logger.info("Wrote %s", json_path)
        return (json_path,)

    csv_path = join(out_dir, "{}.csv".format(stem))
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for p in dataset.points:
            row = [p.k, p.sigma, p.price, p.inversion_residual]
            writer.writerow([_format_float(v) for v in row])

    with open(json_path, "w") as fh:
        json.dump(dataset_to_dict(dataset), fh, indent=2, sort_keys=True)
        fh.write("\n")

    logger.info("Wrote %s and %s", csv_path, json_path)
    return csv_path, json_path


@dataclass(frozen=True)
class SlopeReport:
    T: float
    fd_slope: Optional[float]
    asymptotic_slope: float
    order: str
    digital: float
    bridge_slope: float
    digital_limit: Optional[float]
    atm_vol: float


def slope_report(model, T, cfg=None, fd_step=DEFAULT_FD_STEP):
    """
    Finite-difference, asymptotic and digital-bridge ATM slopes side by side
    """
    cfg = cfg or QuadratureConfig()
    estimate = atm_slope_asymptotic(model, T)
    digital = digital_price(model, 0.0, T, cfg)
    atm_vol = implied_vol(call_price(model, 0.0, T, cfg), 0.0, T).sigma

    try:
        limit = digital_limit(model).value
    except NotApplicable as e:
        logger.debug("No digital limit for %s: %s", model.name, e)
        limit = None

    try:
        fd_slope = atm_slope_fd(model, T, fd_step, cfg)
    except (StepTooSmall, NoConvergence, NonFiniteValue, PriceOutOfBounds) as e:
        logger.warning("No finite-difference slope at T=%s: %s", T, e)
        fd_slope = None

    return SlopeReport(
        T=T,
        fd_slope=fd_slope,
        asymptotic_slope=estimate.value,
        order=estimate.order.value,
        digital=digital,
        bridge_slope=slope_from_digital(digital, atm_vol, T),
        digital_limit=limit,
        atm_vol=atm_vol,
    )
