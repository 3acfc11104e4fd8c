from invoke import task
from levysmile.util.errors import VERIFY_FAILURE_STATUS, ModelConfigError
from levysmile.util.output import (
    exit_with_error,
    print_banner,
    print_divider,
    print_footer,
)
from levysmile.util.verify import run_acceptance
from sys import exit as sys_exit


@task(default=True, iterable=["criterion"])
def verify(ctx, criterion=None):
    """
    Run the numerical acceptance suite and report pass/fail per criterion

    Parameters:
    - criterion (int): only run this criterion number, can be repeated
    """
    try:
        numbers = [int(c) for c in criterion or []]
    except ValueError:
        exit_with_error(
            ModelConfigError("Criteria must be numbers (got: {})".format(criterion))
        )
    results = run_acceptance(numbers)

    print_banner("Acceptance")
    for r in results:
        print(
            "{:>2}. [{}] {} ({:.1f} s)".format(
                r.number, "PASS" if r.passed else "FAIL", r.name, r.seconds
            )
        )
        print("      {}".format(r.detail))
    print_divider()
    num_failed = sum(not r.passed for r in results)
    print("{} passed, {} failed".format(len(results) - num_failed, num_failed))
    print_footer()

    if num_failed:
        sys_exit(VERIFY_FAILURE_STATUS)
