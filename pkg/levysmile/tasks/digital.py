from concurrent.futures import ThreadPoolExecutor
from invoke import task
from levysmile.util.asymptotics import digital_expansion, digital_limit
from levysmile.util.config import get_run_config
from levysmile.util.env import get_num_threads
from levysmile.util.errors import LevySmileError, NotApplicable
from levysmile.util.fourier import digital_integral
from levysmile.util.output import emit, exit_with_error

DIGITAL_COLUMNS = ["T", "digital", "error", "expansion"]


def _digital_row(model, T, cfg):
    result = digital_integral(model, 0.0, T, cfg)
    try:
        expansion = digital_expansion(model, T)
    except NotApplicable:
        expansion = None

    return {
        "T": T,
        "digital": min(max(result.value, 0.0), 1.0),
        "error": result.error_estimate,
        "expansion": expansion,
    }


@task(default=True, iterable=["T", "param"], auto_shortflags=False)
def digital(
    ctx,
    model=None,
    param=None,
    T=None,
    T_sweep=None,
    fmt=None,
    ini_file=None,
    contour_a=None,
    abs_tol=None,
    max_half_periods=None,
):
    """
    ATM digital prices P[S_T >= 1] across maturities, and their small-maturity
    limit

    Parameters:
    - model (str): path to a JSON model file, or a model name
    - param (str): `key=value` parameter override, can be repeated
    - T (float): maturity, can be repeated
    - T_sweep (str): log-spaced maturities as lo:hi[:n]
    - fmt (str): print `csv` or `json` instead of a table
    - ini_file (str): path to an INI file with quadrature settings
    - contour_a (str): contour abscissa, or `auto`
    - abs_tol (float): absolute quadrature tolerance
    - max_half_periods (int): cap on the oscillatory tail length
    """
    try:
        run = get_run_config(
            model,
            param=param,
            T=T,
            T_sweep=T_sweep,
            fmt=fmt,
            ini_file=ini_file,
            contour_a=contour_a,
            abs_tol=abs_tol,
            max_half_periods=max_half_periods,
        )

        with ThreadPoolExecutor(max_workers=get_num_threads()) as pool:
            records = list(
                pool.map(lambda t: _digital_row(run.model, t, run.cfg), run.maturities)
            )

        try:
            limit = digital_limit(run.model)
            records.append(
                {"T": 0.0, "digital": limit.value, "error": None, "expansion": None}
            )
        except NotApplicable as e:
            print("No digital limit: {}".format(e))

        rows = [[r[c] for c in DIGITAL_COLUMNS] for r in records]
        emit(
            "ATM digitals ({})".format(run.model.name),
            DIGITAL_COLUMNS,
            rows,
            records,
            run.fmt,
        )
    except LevySmileError as e:
        exit_with_error(e)
