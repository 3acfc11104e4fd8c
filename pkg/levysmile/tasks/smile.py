from invoke import task
from levysmile.util.config import get_fd_step, get_run_config
from levysmile.util.errors import LevySmileError
from levysmile.util.output import exit_with_error, print_banner, print_footer
from levysmile.util.smile import figure_report, write_dataset

DEFAULT_OUT_DIR = "smiles"


def get_dataset_stem(model, T):
    return "{}_T{:g}".format(model.name, T)


@task(default=True, iterable=["T", "param"], auto_shortflags=False)
def smile(
    ctx,
    model=None,
    param=None,
    T=None,
    grid=None,
    out=DEFAULT_OUT_DIR,
    fmt="csv",
    ini_file=None,
    contour_a=None,
    abs_tol=None,
    max_half_periods=None,
):
    """
    Generate implied volatility smile datasets, one per maturity

    Parameters:
    - model (str): path to a JSON model file, or a model name
    - param (str): `key=value` parameter override, can be repeated
    - T (float): maturity, can be repeated
    - grid (str): log-strike grid as lo:hi:n
    - out (str): output directory
    - fmt (str): `csv` (CSV plus JSON sidecar) or `json`
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
            grid=grid,
            out=out,
            fmt=fmt,
            ini_file=ini_file,
            contour_a=contour_a,
            abs_tol=abs_tol,
            max_half_periods=max_half_periods,
        )
        fd_step = get_fd_step(ini_file)

        print_banner("Smile datasets")
        for maturity in run.maturities:
            dataset = figure_report(run.model, maturity, run.grid, run.cfg, fd_step)
            paths = write_dataset(
                dataset, run.out_dir, get_dataset_stem(run.model, maturity), run.fmt
            )
            num_failed = sum(not p.ok for p in dataset.points)
            print(
                "T={:g}: {} points ({} failed) -> {}".format(
                    maturity, len(dataset.points), num_failed, ", ".join(paths)
                )
            )
        print_footer()
    except LevySmileError as e:
        exit_with_error(e)
