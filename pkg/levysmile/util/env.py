from os import cpu_count, environ
from os.path import dirname, realpath

# When building the project's wheel only the `levysmile` package is included,
# so everything here is relative to the package itself. We also define a DEV
# proj root, for dev. related tasks
PROJ_ROOT = dirname(dirname(realpath(__file__)))
DEV_PROJ_ROOT = dirname(dirname(dirname(realpath(__file__))))

INI_FILE_ENV_VAR = "LEVYSMILE_INI_FILE"
THREADS_ENV_VAR = "LEVYSMILE_THREADS"
LOG_LEVEL_ENV_VAR = "LEVYSMILE_LOG_LEVEL"


def get_num_threads():
    """
    Number of worker threads for strike/maturity fan-out
    """
    value = environ.get(THREADS_ENV_VAR, "").strip()
    if not value:
        return cpu_count() or 1

    try:
        num_threads = int(value)
    except ValueError:
        num_threads = 0

    if num_threads < 1:
        # Imported here to keep env.py importable from the errors module
        from levysmile.util.errors import ModelConfigError

        raise ModelConfigError(
            "{} must be a positive integer (got: '{}')".format(THREADS_ENV_VAR, value)
        )

    return num_threads


def get_log_level():
    return environ.get(LOG_LEVEL_ENV_VAR, "WARNING").strip().upper() or "WARNING"
