"""
Exponential Levy model parameterisations

Every model is a frozen dataclass holding its parameters and a drift policy:
either the string `MARTINGALE` (drift solved from E[exp(X_1)] = 1) or a
float (explicit drift b). The log-mgf convention throughout is

    log M(s, T) = T * (b * s + sigma^2 * s^2 / 2 + psi(s))

with psi the closed-form jump part of each model. All functions in this module
accept complex scalars or numpy arrays for `s`.
"""

import json
import numpy as np
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from levysmile.util.errors import (
    BranchCut,
    ModelConfigError,
    MomentExplosion,
    NonFiniteValue,
    StripViolation,
)
from math import cos, inf, isfinite, log, pi, sqrt
from os.path import exists
from scipy.special import gamma
from typing import ClassVar, Optional, Union

MARTINGALE = "martingale"

# Drifts below this magnitude are treated as b = 0 by the asymptotics
ZERO_DRIFT_TOL = 1e-12


def _require(condition, message):
    if not condition:
        raise ModelConfigError(message)


# ----------
# Result types
# ----------


@dataclass(frozen=True)
class MomentStrip:
    s_minus: float
    s_plus: float
    bounded_minus: bool
    bounded_plus: bool

    def contains(self, re_s):
        return self.s_minus < re_s < self.s_plus


class ProfileKind(Enum):
    JUMP_DIFFUSION = "jump_diffusion"
    POWER_LAW = "power_law"
    LOGARITHMIC = "logarithmic"


class Variation(Enum):
    FINITE = "finite"
    INFINITE = "infinite"


@dataclass(frozen=True)
class AsymptoticProfile:
    """
    Leading behaviour of psi(a + iy) as y -> infinity

    For POWER_LAW, Re psi(a + iy) ~ -c1 * y^eta. For JUMP_DIFFUSION the
    Brownian volatility `sigma` dominates, and LOGARITHMIC exponents grow like
    log(y).
    """

    kind: ProfileKind
    drift_b: float
    variation: Variation
    sigma: Optional[float] = None
    eta: Optional[float] = None
    c1: Optional[float] = None


# ----------
# Models
# ----------


class LevyModel:
    """
    Base class for the supported models. Subclasses are frozen dataclasses
    whose last field is `drift`
    """

    name: ClassVar[str] = ""

    # Maps JSON parameter names to dataclass field names, and back
    param_aliases: ClassVar[dict] = {}
    output_names: ClassVar[dict] = {}

    def __post_init__(self):
        drift = self.drift
        if isinstance(drift, str):
            _require(
                drift.lower() == MARTINGALE,
                "Unrecognised drift policy: '{}'".format(drift),
            )
            object.__setattr__(self, "drift", MARTINGALE)
        else:
            try:
                drift = float(drift)
            except (TypeError, ValueError):
                raise ModelConfigError("Drift must be 'martingale' or a number")
            _require(isfinite(drift), "Explicit drift must be finite")
            object.__setattr__(self, "drift", drift)

        for f in fields(self):
            if f.name == "drift":
                continue
            value = getattr(self, f.name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ModelConfigError(
                    "Parameter '{}' of the {} model must be a number".format(
                        f.name, self.name
                    )
                )
            _require(
                isfinite(value),
                "Parameter '{}' of the {} model must be finite".format(
                    f.name, self.name
                ),
            )
            object.__setattr__(self, f.name, value)

        self._validate()

    @property
    def is_martingale(self):
        return self.drift == MARTINGALE

    @property
    def brownian_sigma(self):
        return 0.0

    def _validate(self):
        raise NotImplementedError

    def _strip(self):
        raise NotImplementedError

    def _psi(self, s):
        raise NotImplementedError

    def _profile(self, b):
        raise NotImplementedError


@dataclass(frozen=True)
class BlackScholes(LevyModel):
    name: ClassVar[str] = "blackscholes"

    sigma: float
    drift: Union[str, float] = MARTINGALE

    def _validate(self):
        _require(self.sigma > 0, "Black-Scholes requires sigma > 0")

    @property
    def brownian_sigma(self):
        return self.sigma

    def _strip(self):
        return MomentStrip(-inf, inf, False, False)

    def _psi(self, s):
        return np.zeros_like(s)

    def _profile(self, b):
        return AsymptoticProfile(
            ProfileKind.JUMP_DIFFUSION, b, Variation.INFINITE, sigma=self.sigma
        )


@dataclass(frozen=True)
class Merton(LevyModel):
    name: ClassVar[str] = "merton"
    param_aliases: ClassVar[dict] = {"lambda": "lam"}
    output_names: ClassVar[dict] = {"lam": "lambda"}

    sigma: float
    lam: float
    delta: float
    mu: float
    drift: Union[str, float] = MARTINGALE

    def _validate(self):
        _require(self.sigma > 0, "Merton requires sigma > 0")
        _require(self.lam > 0, "Merton requires lambda > 0")
        _require(self.delta > 0, "Merton requires delta > 0")

    @property
    def brownian_sigma(self):
        return self.sigma

    def _strip(self):
        return MomentStrip(-inf, inf, False, False)

    def _psi(self, s):
        return self.lam * np.expm1(0.5 * self.delta**2 * s * s + self.mu * s)

    def _profile(self, b):
        return AsymptoticProfile(
            ProfileKind.JUMP_DIFFUSION, b, Variation.INFINITE, sigma=self.sigma
        )


@dataclass(frozen=True)
class Kou(LevyModel):
    name: ClassVar[str] = "kou"
    param_aliases: ClassVar[dict] = {"lambda": "lam"}
    output_names: ClassVar[dict] = {"lam": "lambda"}

    sigma: float
    lam: float
    p: float
    lambda_plus: float
    lambda_minus: float
    drift: Union[str, float] = MARTINGALE

    def _validate(self):
        _require(self.sigma > 0, "Kou requires sigma > 0")
        _require(self.lam > 0, "Kou requires lambda > 0")
        _require(0 < self.p < 1, "Kou requires p in (0, 1)")
        _require(self.lambda_plus > 1, "Kou requires lambda_plus > 1")
        _require(self.lambda_minus > 0, "Kou requires lambda_minus > 0")

    @property
    def brownian_sigma(self):
        return self.sigma

    def _strip(self):
        return MomentStrip(-self.lambda_minus, self.lambda_plus, True, True)

    def _psi(self, s):
        # lambda * (p l+ / (l+ - s) + (1-p) l- / (l- + s) - 1), rearranged so
        # that psi(0) = 0 exactly
        up = self.p * s / (self.lambda_plus - s)
        down = (1 - self.p) * s / (self.lambda_minus + s)
        return self.lam * (up - down)

    def _profile(self, b):
        return AsymptoticProfile(
            ProfileKind.JUMP_DIFFUSION, b, Variation.INFINITE, sigma=self.sigma
        )


def gamma_neg(Y):
    """
    Gamma(-Y) for Y in (0, 1), which is negative
    """
    return float(gamma(-Y))


@dataclass(frozen=True)
class CGMY(LevyModel):
    name: ClassVar[str] = "cgmy"
    param_aliases: ClassVar[dict] = {"c": "C", "g": "G", "m": "M", "y": "Y"}
    output_names: ClassVar[dict] = {"C": "c", "G": "g", "M": "m", "Y": "y"}

    C: float
    G: float
    M: float
    Y: float
    drift: Union[str, float] = MARTINGALE

    def _validate(self):
        _require(self.C > 0, "CGMY requires C > 0")
        _require(self.G > 0, "CGMY requires G > 0")
        _require(self.M > 1, "CGMY requires M > 1")
        _require(0 < self.Y < 1, "CGMY requires Y in (0, 1)")

    def _strip(self):
        return MomentStrip(-self.G, self.M, True, True)

    def _psi(self, s):
        C, G, M, Y = self.C, self.G, self.M, self.Y
        # Principal branch powers, analytic since Re(M - s), Re(G + s) > 0
        return (
            C
            * gamma_neg(Y)
            * (np.power(M - s, Y) - M**Y + np.power(G + s, Y) - G**Y)
        )

    def _profile(self, b):
        c1 = -2.0 * self.C * gamma_neg(self.Y) * cos(pi * self.Y / 2)
        return AsymptoticProfile(
            ProfileKind.POWER_LAW, b, Variation.FINITE, eta=self.Y, c1=c1
        )


@dataclass(frozen=True)
class VarianceGamma(LevyModel):
    name: ClassVar[str] = "vg"
    param_aliases: ClassVar[dict] = {"sigma_vg": "sigma"}
    output_names: ClassVar[dict] = {"sigma": "sigma_vg"}

    sigma: float
    nu: float
    theta: float
    drift: Union[str, float] = MARTINGALE

    def _validate(self):
        _require(self.sigma > 0, "Variance gamma requires sigma_vg > 0")
        _require(self.nu > 0, "Variance gamma requires nu > 0")

    def _roots(self):
        # Roots of 1 - theta nu s - sigma^2 nu s^2 / 2, ordered s- < 0 < s+
        quad_a = self.sigma**2 * self.nu
        disc = sqrt(self.theta**2 * self.nu**2 + 2 * self.sigma**2 * self.nu)
        s_plus = (-self.theta * self.nu + disc) / quad_a
        s_minus = (-self.theta * self.nu - disc) / quad_a
        return s_minus, s_plus

    def quadratic(self, s):
        return 1 - self.theta * self.nu * s - 0.5 * self.sigma**2 * self.nu * s * s

    def _strip(self):
        s_minus, s_plus = self._roots()
        return MomentStrip(s_minus, s_plus, True, True)

    def _psi(self, s):
        s_minus, s_plus = self._roots()
        # Factorised so that each logarithm has an argument in the right
        # half-plane on the strip
        return -(np.log1p(-s / s_plus) + np.log1p(-s / s_minus)) / self.nu

    def _profile(self, b):
        return AsymptoticProfile(ProfileKind.LOGARITHMIC, b, Variation.FINITE)


@dataclass(frozen=True)
class NIG(LevyModel):
    name: ClassVar[str] = "nig"
    param_aliases: ClassVar[dict] = {"delta_nig": "delta"}

    alpha: float
    beta: float
    delta: float
    drift: Union[str, float] = MARTINGALE

    def _validate(self):
        _require(self.delta > 0, "NIG requires delta > 0")
        _require(
            self.alpha > max(self.beta + 1, -self.beta),
            "NIG requires alpha > max(beta + 1, -beta)",
        )

    def _strip(self):
        return MomentStrip(
            -self.alpha - self.beta, self.alpha - self.beta, True, True
        )

    def _psi(self, s):
        alpha, beta = self.alpha, self.beta
        root = np.sqrt(alpha - beta - s) * np.sqrt(alpha + beta + s)
        return self.delta * (sqrt(alpha**2 - beta**2) - root)

    def _profile(self, b):
        return AsymptoticProfile(
            ProfileKind.POWER_LAW, b, Variation.INFINITE, eta=1.0, c1=self.delta
        )


def _log_cosh(z):
    # log(cosh z) continued analytically from the real axis, without
    # overflowing for large |Re z|
    sign = np.where(np.real(z) >= 0, 1.0, -1.0)
    w = sign * z
    return w + np.log1p(np.exp(-2.0 * w)) - log(2.0)


@dataclass(frozen=True)
class Meixner(LevyModel):
    name: ClassVar[str] = "meixner"

    a_bar: float
    b_bar: float
    d_bar: float
    drift: Union[str, float] = MARTINGALE

    def _validate(self):
        _require(self.d_bar > 0, "Meixner requires d_bar > 0")
        _require(-pi < self.b_bar < pi, "Meixner requires b_bar in (-pi, pi)")
        _require(
            0 < self.a_bar < pi - self.b_bar,
            "Meixner requires 0 < a_bar < pi - b_bar",
        )

    def _strip(self):
        return MomentStrip(
            (-pi - self.b_bar) / self.a_bar,
            (pi - self.b_bar) / self.a_bar,
            True,
            True,
        )

    def _psi(self, s):
        z = 0.5 * (-1j * self.a_bar * s - 1j * self.b_bar)
        return 2.0 * self.d_bar * (log(cos(self.b_bar / 2)) - _log_cosh(z))

    def _profile(self, b):
        return AsymptoticProfile(
            ProfileKind.POWER_LAW,
            b,
            Variation.INFINITE,
            eta=1.0,
            c1=self.a_bar * self.d_bar,
        )


MODEL_CLASSES = {
    cls.name: cls
    for cls in (BlackScholes, Merton, Kou, CGMY, VarianceGamma, NIG, Meixner)
}

# Alternative names accepted in model files
MODEL_NAME_ALIASES = {
    "bs": "blackscholes",
    "black_scholes": "blackscholes",
    "variance_gamma": "vg",
    "variancegamma": "vg",
}


# ----------
# Operations
# ----------


def critical_moments(model):
    return model._strip()


def _check_strip(model, s):
    if isinstance(model, VarianceGamma):
        on_cut = (np.imag(s) == 0) & (np.real(model.quadratic(s)) <= 0)
        if np.any(on_cut):
            raise BranchCut(
                "Argument lies on the branch cut of the variance gamma exponent"
            )

    strip = model._strip()
    re_s = np.real(s)
    if np.any(re_s <= strip.s_minus) or np.any(re_s >= strip.s_plus):
        raise StripViolation(
            "Re(s) outside the strip ({}, {}) of the {} model".format(
                strip.s_minus, strip.s_plus, model.name
            )
        )


def _as_output(values, like):
    if np.ndim(like) == 0:
        return complex(values)
    return values


def psi(model, s):
    """
    Jump part psi(s) of the characteristic exponent
    """
    s_arr = np.asarray(s, dtype=complex)
    _check_strip(model, s_arr)
    with np.errstate(over="ignore", invalid="ignore"):
        values = model._psi(s_arr)

    if not np.all(np.isfinite(values)):
        raise NonFiniteValue("psi produced a non-finite value")

    return _as_output(values, s)


def martingale_drift(model):
    """
    Drift b = -sigma^2/2 - psi(1) making exp(X) a martingale
    """
    strip = model._strip()
    if strip.s_plus <= 1:
        raise MomentExplosion(
            "The {} model has s_+ = {} <= 1".format(model.name, strip.s_plus)
        )

    sigma = model.brownian_sigma
    return -0.5 * sigma**2 - psi(model, 1.0).real


def resolve_drift(model):
    if model.is_martingale:
        return martingale_drift(model)

    return model.drift


def exponent(model, s, b=None):
    """
    Log-mgf per unit time: b s + sigma^2 s^2 / 2 + psi(s)
    """
    if b is None:
        b = resolve_drift(model)

    s_arr = np.asarray(s, dtype=complex)
    sigma = model.brownian_sigma
    values = b * s_arr + 0.5 * sigma**2 * s_arr * s_arr + psi(model, s_arr)
    return _as_output(values, s)


def mgf(model, s, T, b=None):
    """
    Moment generating function M(s, T) = E[exp(s X_T)]
    """
    if not T > 0:
        raise ModelConfigError("Maturity must be positive (got: {})".format(T))

    with np.errstate(over="ignore", invalid="ignore"):
        values = np.exp(T * np.asarray(exponent(model, s, b), dtype=complex))

    if not np.all(np.isfinite(values)):
        raise NonFiniteValue("mgf overflowed at T = {}".format(T))

    return _as_output(values, s)


def variation(model):
    return asymptotic_profile(model).variation


def asymptotic_profile(model):
    return model._profile(resolve_drift(model))


# ----------
# Model files
# ----------


def parse_model(model_dict):
    """
    Build a model from its JSON representation, e.g.:

    {"model": "nig", "params": {"alpha": 8.5, "beta": 2.0, "delta": 1.1},
     "drift": "martingale"}
    """
    if not isinstance(model_dict, dict):
        raise ModelConfigError("Model definition must be a JSON object")

    name = str(model_dict.get("model", "")).strip().lower()
    name = MODEL_NAME_ALIASES.get(name, name)
    if name not in MODEL_CLASSES:
        raise ModelConfigError(
            "Unrecognised model '{}', must be one in: {}".format(
                name, sorted(MODEL_CLASSES)
            )
        )
    cls = MODEL_CLASSES[name]

    params = model_dict.get("params", {})
    if not isinstance(params, dict):
        raise ModelConfigError("'params' must be a JSON object")

    field_names = [f.name for f in fields(cls) if f.name != "drift"]
    kwargs = {}
    for key, value in params.items():
        field_name = cls.param_aliases.get(key.lower(), key)
        if field_name not in field_names:
            raise ModelConfigError(
                "Unrecognised parameter '{}' for the {} model".format(key, name)
            )
        kwargs[field_name] = value

    missing = [f for f in field_names if f not in kwargs]
    if missing:
        raise ModelConfigError(
            "Missing parameters for the {} model: {}".format(name, missing)
        )

    return cls(drift=model_dict.get("drift", MARTINGALE), **kwargs)


def load_model(model_file):
    if not exists(model_file):
        raise ModelConfigError("Did not find model file at: {}".format(model_file))

    with open(model_file, "r") as fh:
        try:
            model_dict = json.load(fh)
        except json.JSONDecodeError as e:
            raise ModelConfigError(
                "Malformed model file {}: {}".format(model_file, e)
            )

    return parse_model(model_dict)


def model_to_dict(model):
    params = {
        model.output_names.get(key, key): value
        for key, value in asdict(model).items()
        if key != "drift"
    }
    return {"model": model.name, "params": params, "drift": model.drift}


def with_overrides(model, overrides):
    """
    Return a copy of the model with some parameters replaced. Keys use the
    model file names, `drift` is accepted too
    """
    model_dict = model_to_dict(model)
    for key, value in overrides.items():
        if key == "drift":
            model_dict["drift"] = value
        else:
            model_dict["params"][key] = value

    return parse_model(model_dict)


def with_drift(model, drift):
    return replace(model, drift=drift)
