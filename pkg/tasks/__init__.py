from invoke import Collection

from . import format_code
from . import tests

ns = Collection(
    format_code,
    tests,
)
