from glob import glob
from invoke import task
from levysmile.util.env import DEV_PROJ_ROOT
from levysmile.util.errors import ModelConfigError
from levysmile.util.models import load_model
from os.path import join

SOURCE_DIRS = ["levysmile", "tasks", "tests"]
MODELS_DIR = join(DEV_PROJ_ROOT, "models")


@task(default=True)
def format(ctx, check=False):
    """
    Format the sources with black, lint them with flake8, and make sure every
    shipped model file still loads

    Parameters:
    - check (bool): only check the formatting, do not change any file
    """
    sources = " ".join(SOURCE_DIRS)
    with ctx.cd(DEV_PROJ_ROOT):
        ctx.run("python3 -m black {} {}".format("--check" if check else "", sources))
        ctx.run("python3 -m flake8 {}".format(sources))

    model_files = sorted(glob(join(MODELS_DIR, "*.json")))
    broken = []
    for model_file in model_files:
        try:
            load_model(model_file)
        except ModelConfigError as e:
            broken.append("{}: {}".format(model_file, e))

    if broken:
        print("\n".join(broken))
        raise RuntimeError("{} model file(s) do not load".format(len(broken)))

    print("Checked {} model files".format(len(model_files)))
