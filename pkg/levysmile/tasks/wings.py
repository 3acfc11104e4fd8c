from dataclasses import asdict
from invoke import task
from levysmile.util.config import get_run_config
from levysmile.util.errors import LevySmileError, NotApplicable
from levysmile.util.lee import steepness_equivalence, wing_asymptotes
from levysmile.util.output import emit, exit_with_error, print_fields

WING_COLUMNS = [
    "T",
    "right",
    "left",
    "right_steeper",
    "slope_positive",
    "equivalent",
]


@task(default=True, iterable=["T", "param"], auto_shortflags=False)
def wings(ctx, model=None, param=None, T=None, fmt=None):
    """
    Lee moment-formula wing asymptotes, and whether the steeper wing matches
    the sign of the small-maturity ATM slope

    Parameters:
    - model (str): path to a JSON model file, or a model name
    - param (str): `key=value` parameter override, can be repeated
    - T (float): maturity, can be repeated
    - fmt (str): print `csv` or `json` instead of a table
    """
    try:
        run = get_run_config(model, param=param, T=T, fmt=fmt)
        reports = [wing_asymptotes(run.model, t) for t in run.maturities]
        rows = [
            [
                t,
                r.right_asymptote,
                r.left_asymptote,
                r.right_steeper,
                r.atm_slope_positive,
                r.equivalent,
            ]
            for t, r in zip(run.maturities, reports)
        ]
        records = [dict(T=t, **asdict(r)) for t, r in zip(run.maturities, reports)]
        emit(
            "Lee wings ({})".format(run.model.name),
            WING_COLUMNS,
            rows,
            records,
            run.fmt,
        )

        if not run.fmt:
            try:
                verdict = steepness_equivalence(run.model)
                print_fields(
                    [
                        ("Equivalence holds", verdict.holds),
                        ("Negative drift", verdict.negative_drift),
                        ("Reduced condition", verdict.condition),
                        ("Condition holds", verdict.reduced_condition),
                    ]
                )
            except NotApplicable as e:
                print("Steepness equivalence: {}".format(e))
    except LevySmileError as e:
        exit_with_error(e)
