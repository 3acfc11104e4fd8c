from invoke import task
from levysmile.util.config import get_fd_step, get_run_config
from levysmile.util.errors import LevySmileError
from levysmile.util.output import emit, exit_with_error
from levysmile.util.smile import slope_report

SLOPE_COLUMNS = [
    "T",
    "fd_slope",
    "asymptotic",
    "order",
    "bridge",
    "digital",
    "limit",
]


@task(default=True, iterable=["T", "param"], auto_shortflags=False)
def slope(
    ctx,
    model=None,
    param=None,
    T=None,
    fmt=None,
    ini_file=None,
    contour_a=None,
    abs_tol=None,
    max_half_periods=None,
):
    """
    Report ATM implied vol slopes: finite difference, small-maturity
    asymptotics, and the slope implied by the ATM digital

    Parameters:
    - model (str): path to a JSON model file, or a model name
    - param (str): `key=value` parameter override, can be repeated
    - T (float): maturity, can be repeated
    - fmt (str): print `csv` or `json` instead of a table
    - ini_file (str): path to an INI file with quadrature/smile settings
    - contour_a (str): contour abscissa, or `auto`
    - abs_tol (float): absolute quadrature tolerance
    - max_half_periods (int): cap on the oscillatory tail length
    """
    try:
        run = get_run_config(
            model,
            param=param,
            T=T,
            fmt=fmt,
            ini_file=ini_file,
            contour_a=contour_a,
            abs_tol=abs_tol,
            max_half_periods=max_half_periods,
        )
        fd_step = get_fd_step(ini_file)

        reports = [slope_report(run.model, t, run.cfg, fd_step) for t in run.maturities]
        rows = [
            [
                r.T,
                r.fd_slope,
                r.asymptotic_slope,
                r.order,
                r.bridge_slope,
                r.digital,
                r.digital_limit,
            ]
            for r in reports
        ]
        emit(
            "ATM slopes ({})".format(run.model.name),
            SLOPE_COLUMNS,
            rows,
            reports,
            run.fmt,
        )
    except LevySmileError as e:
        exit_with_error(e)
