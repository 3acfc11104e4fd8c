from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import dataclass
from levysmile.util.env import INI_FILE_ENV_VAR
from levysmile.util.errors import ModelConfigError
from levysmile.util.fourier import QuadratureConfig
from levysmile.util.models import MARTINGALE, LevyModel, load_model, with_overrides
from levysmile.util.presets import FIGURE_MATURITIES, PRESETS, get_preset
from levysmile.util.smile import DEFAULT_FD_STEP
from numpy import geomspace, linspace
from os import environ
from os.path import exists
from typing import List, Optional

QUADRATURE_SECTION = "Quadrature"
SMILE_SECTION = "Smile"

# Reconstructed figure grids: k in [-0.5, 0.5] for Kou, [-0.6, 0.6] for NIG
DEFAULT_GRID = "-0.5:0.5:101"
WIDE_GRID = "-0.6:0.6:121"
DEFAULT_SWEEP_POINTS = 5


def get_ini_file(ini_file=None):
    """
    Return the INI file to read: the explicit one if given (it must exist),
    else the one in the environment, else None
    """
    if ini_file:
        if not exists(ini_file):
            raise ModelConfigError("Did not find config file at: {}".format(ini_file))
        return ini_file

    return environ.get(INI_FILE_ENV_VAR) or None


def get_ini_value(ini_file, section, key):
    if not ini_file:
        return ""

    if not exists(ini_file):
        raise ModelConfigError("Did not find config file at: {}".format(ini_file))

    config = ConfigParser()
    try:
        config.read(ini_file)
    except ConfigParserError as e:
        raise ModelConfigError("Malformed config file {}: {}".format(ini_file, e))

    if not config.has_section(section):
        return ""

    return config[section].get(key, "").strip()


def _parse_number(value, name, cast=float):
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ModelConfigError("Invalid value for {}: '{}'".format(name, value))


def get_quadrature_config(ini_file=None, **overrides):
    """
    Build the quadrature settings. Keyword overrides (e.g. from command line
    flags) take precedence over the INI file, which takes precedence over the
    defaults. Overrides set to None are ignored
    """
    ini_file = get_ini_file(ini_file)
    casts = {
        "contour_a": None,
        "abs_tol": float,
        "max_half_periods": int,
        "acceleration_order": int,
        "panel_rule": int,
    }
    unknown = set(overrides) - set(casts)
    if unknown:
        raise ModelConfigError("Unrecognised quadrature settings: {}".format(unknown))

    kwargs = {}
    for key, cast in casts.items():
        value = overrides.get(key)
        if value is None:
            value = get_ini_value(ini_file, QUADRATURE_SECTION, key) or None
        if value is None:
            continue

        if key == "contour_a":
            if str(value).strip().lower() == "auto":
                value = "auto"
            else:
                value = _parse_number(value, key)
        elif key == "max_half_periods":
            value = int(_parse_number(value, key))
        else:
            value = _parse_number(value, key, cast)
        kwargs[key] = value

    return QuadratureConfig(**kwargs)


def parse_grid(grid_spec):
    """
    Parse a `lo:hi:n` log-strike grid into an evenly spaced list
    """
    parts = [p.strip() for p in str(grid_spec).split(":")]
    if len(parts) != 3:
        raise ModelConfigError(
            "Grid must be of the form lo:hi:n (got: '{}')".format(grid_spec)
        )

    lo = _parse_number(parts[0], "grid")
    hi = _parse_number(parts[1], "grid")
    num = _parse_number(parts[2], "grid", int)
    if num < 1 or (num > 1 and not lo < hi):
        raise ModelConfigError("Invalid grid: '{}'".format(grid_spec))

    return [float(k) for k in linspace(lo, hi, num)]


def parse_sweep(sweep_spec):
    """
    Parse a `lo:hi[:n]` maturity sweep into log-spaced maturities, in the
    order given
    """
    parts = [p.strip() for p in str(sweep_spec).split(":")]
    if len(parts) not in (2, 3):
        raise ModelConfigError(
            "Sweep must be of the form lo:hi[:n] (got: '{}')".format(sweep_spec)
        )

    lo = _parse_number(parts[0], "sweep")
    hi = _parse_number(parts[1], "sweep")
    num = DEFAULT_SWEEP_POINTS
    if len(parts) == 3:
        num = _parse_number(parts[2], "sweep", int)

    if not (lo > 0 and hi > 0) or num < 1:
        raise ModelConfigError("Invalid maturity sweep: '{}'".format(sweep_spec))

    if num == 1:
        return [lo]
    return [float(T) for T in geomspace(lo, hi, num)]


def get_smile_grid(ini_file=None, grid_spec=None):
    if grid_spec is None:
        grid_spec = get_ini_value(get_ini_file(ini_file), SMILE_SECTION, "grid")

    return parse_grid(grid_spec or DEFAULT_GRID)


def get_fd_step(ini_file=None):
    value = get_ini_value(get_ini_file(ini_file), SMILE_SECTION, "fd_step")
    if not value:
        return DEFAULT_FD_STEP

    step = _parse_number(value, "fd_step")
    if not step > 0:
        raise ModelConfigError("fd_step must be positive (got: {})".format(step))
    return step


def parse_param_overrides(params):
    """
    Parse `key=value` strings from repeated `--param` flags
    """
    overrides = {}
    for param in params or []:
        key, sep, value = str(param).partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ModelConfigError(
                "Parameters must be given as key=value (got: '{}')".format(param)
            )

        if key == "drift" and value.lower() == MARTINGALE:
            overrides[key] = MARTINGALE
        else:
            overrides[key] = _parse_number(value, key)

    return overrides


def get_model(model, params=None):
    """
    Load a model from a JSON model file, or start from the reference
    parameters when `model` is a model name. `params` are `key=value`
    overrides applied on top
    """
    if not model:
        raise ModelConfigError("No model given (use --model <file or name>)")

    if exists(model):
        levy_model = load_model(model)
    elif model.strip().lower() in PRESETS:
        levy_model = get_preset(model.strip().lower())
    else:
        raise ModelConfigError(
            "Model '{}' is neither a model file nor one of: {}".format(
                model, sorted(PRESETS)
            )
        )

    overrides = parse_param_overrides(params)
    if overrides:
        levy_model = with_overrides(levy_model, overrides)

    return levy_model


@dataclass(frozen=True)
class RunConfig:
    model: LevyModel
    maturities: List[float]
    cfg: QuadratureConfig
    grid: Optional[List[float]] = None
    out_dir: Optional[str] = None
    fmt: Optional[str] = None


def parse_maturities(T=None, T_sweep=None):
    maturities = [_parse_number(t, "T") for t in (T or [])]
    if T_sweep:
        maturities += parse_sweep(T_sweep)

    for t in maturities:
        if not t > 0:
            raise ModelConfigError("Maturities must be positive (got: {})".format(t))

    return maturities


def get_run_config(
    model,
    param=None,
    T=None,
    T_sweep=None,
    grid=None,
    out=None,
    fmt=None,
    ini_file=None,
    contour_a=None,
    abs_tol=None,
    max_half_periods=None,
):
    """
    Gather everything a command needs from its flags, the INI file and the
    defaults. Maturities default to the figure maturities of the model
    """
    levy_model = get_model(model, param)
    maturities = parse_maturities(T, T_sweep)
    if not maturities:
        maturities = list(FIGURE_MATURITIES.get(str(model).strip().lower(), []))
    if not maturities:
        raise ModelConfigError("No maturity given (use --T or --T-sweep)")

    cfg = get_quadrature_config(
        ini_file,
        contour_a=contour_a,
        abs_tol=abs_tol,
        max_half_periods=max_half_periods,
    )

    return RunConfig(
        model=levy_model,
        maturities=maturities,
        cfg=cfg,
        grid=get_smile_grid(ini_file, grid),
        out_dir=out,
        fmt=fmt,
    )
