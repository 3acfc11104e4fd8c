from invoke import Collection

from . import digital
from . import slope
from . import smile
from . import verify
from . import wings

task_ns = Collection(
    digital,
    slope,
    smile,
    verify,
    wings,
)
