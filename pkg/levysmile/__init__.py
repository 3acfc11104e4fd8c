# flake8: noqa

from . import tasks
from . import util
