import logging
from invoke import Program
from levysmile.tasks import task_ns
from levysmile.util.env import get_log_level
from levysmile.util.version import get_version
from sys import argv as sys_argv

PROGRAM_NAME = "levysmile"

# invoke turns single-letter parameters into short flags (-T), we also accept
# the long spelling
LONG_SHORT_FLAGS = {"--T": "-T"}


def normalise_argv(argv):
    normalised = []
    for arg in argv:
        flag, sep, value = arg.partition("=")
        if flag in LONG_SHORT_FLAGS:
            normalised.append(LONG_SHORT_FLAGS[flag])
            if sep:
                normalised.append(value)
        else:
            normalised.append(arg)

    return normalised


def configure_logging():
    level = get_log_level()
    if not isinstance(logging.getLevelName(level), int):
        level = "WARNING"

    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def main(argv=None):
    """
    Entry point. `argv` excludes the program name, and defaults to the
    process arguments
    """
    configure_logging()

    if argv is None:
        argv = sys_argv[1:]

    program = Program(
        name=PROGRAM_NAME,
        binary=PROGRAM_NAME,
        binary_names=[PROGRAM_NAME],
        namespace=task_ns,
        version=get_version(),
    )
    program.run([PROGRAM_NAME] + normalise_argv(list(argv)))
