from invoke import task
from levysmile.util.env import DEV_PROJ_ROOT
from subprocess import run


@task(default=True)
def tests(ctx, slow=False, keyword=None):
    """
    Run the test suite

    Parameters:
    - slow (bool): also run the long-running numerical checks
    - keyword (str): only run tests matching this pytest keyword expression
    """
    pytest_cmd = [
        "python3 -m pytest",
        "" if slow else '-m "not slow"',
        '-k "{}"'.format(keyword) if keyword else "",
    ]
    pytest_cmd = " ".join(pytest_cmd)
    run(pytest_cmd, shell=True, check=True, cwd=DEV_PROJ_ROOT)
