import pytest
from levysmile.util.env import INI_FILE_ENV_VAR, LOG_LEVEL_ENV_VAR, THREADS_ENV_VAR
from levysmile.util.presets import get_preset


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for env_var in [INI_FILE_ENV_VAR, LOG_LEVEL_ENV_VAR, THREADS_ENV_VAR]:
        monkeypatch.delenv(env_var, raising=False)


@pytest.fixture
def bs():
    return get_preset("blackscholes")


@pytest.fixture
def merton():
    return get_preset("merton")


@pytest.fixture
def kou():
    return get_preset("kou")


@pytest.fixture
def cgmy():
    return get_preset("cgmy")


@pytest.fixture
def vg():
    return get_preset("vg")


@pytest.fixture
def nig():
    return get_preset("nig")


@pytest.fixture
def meixner():
    return get_preset("meixner")
