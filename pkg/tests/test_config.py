import json
import pytest
from levysmile.util.config import (
    DEFAULT_GRID,
    get_fd_step,
    get_model,
    get_quadrature_config,
    get_run_config,
    get_smile_grid,
    parse_grid,
    parse_maturities,
    parse_param_overrides,
    parse_sweep,
)
from levysmile.util.env import (
    INI_FILE_ENV_VAR,
    LOG_LEVEL_ENV_VAR,
    THREADS_ENV_VAR,
    get_log_level,
    get_num_threads,
)
from levysmile.util.errors import ModelConfigError
from levysmile.util.models import NIG, MARTINGALE
from levysmile.util.presets import FIGURE_MATURITIES, PRESETS
from levysmile.util.smile import DEFAULT_FD_STEP

INI_CONTENTS = """
[Quadrature]
contour_a = 0.75
abs_tol = 1e-9
max_half_periods = 5000

[Smile]
grid = -0.2:0.2:5
fd_step = 2e-3
"""


@pytest.fixture
def ini_file(tmp_path):
    path = tmp_path / "levysmile.ini"
    path.write_text(INI_CONTENTS)
    return str(path)


class TestQuadratureConfig:
    def test_defaults(self):
        cfg = get_quadrature_config()
        assert cfg.contour_a == "auto"
        assert cfg.abs_tol == 1e-10

    def test_ini_file(self, ini_file):
        cfg = get_quadrature_config(ini_file)
        assert cfg.contour_a == 0.75
        assert cfg.abs_tol == 1e-9
        assert cfg.max_half_periods == 5000

    def test_env_var(self, ini_file, monkeypatch):
        monkeypatch.setenv(INI_FILE_ENV_VAR, ini_file)
        assert get_quadrature_config().abs_tol == 1e-9

    def test_flags_win(self, ini_file):
        cfg = get_quadrature_config(ini_file, contour_a="auto", abs_tol="1e-8")
        assert cfg.contour_a == "auto"
        assert cfg.abs_tol == 1e-8
        assert cfg.max_half_periods == 5000

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelConfigError):
            get_quadrature_config(str(tmp_path / "missing.ini"))

    def test_invalid_values(self, ini_file):
        with pytest.raises(ModelConfigError):
            get_quadrature_config(ini_file, abs_tol="tight")

        with pytest.raises(ModelConfigError):
            get_quadrature_config(ini_file, abs_tol="-1")

        with pytest.raises(ModelConfigError):
            get_quadrature_config(tolerance=1e-8)


class TestGrids:
    def test_parse_grid(self):
        assert parse_grid("-0.5:0.5:5") == [-0.5, -0.25, 0.0, 0.25, 0.5]
        assert parse_grid("0:0:1") == [0.0]

    @pytest.mark.parametrize("grid_spec", ["-0.5:0.5", "0.5:-0.5:5", "a:b:c", "0:1:0"])
    def test_invalid_grid(self, grid_spec):
        with pytest.raises(ModelConfigError):
            parse_grid(grid_spec)

    def test_smile_grid(self, ini_file):
        assert len(get_smile_grid()) == 101
        assert get_smile_grid(ini_file) == pytest.approx([-0.2, -0.1, 0.0, 0.1, 0.2])
        assert get_smile_grid(ini_file, "-0.1:0.1:3") == pytest.approx([-0.1, 0, 0.1])
        assert get_smile_grid(grid_spec=DEFAULT_GRID)[0] == -0.5

    def test_parse_sweep(self):
        assert parse_sweep("1e-2:1e-4:3") == pytest.approx([1e-2, 1e-3, 1e-4])
        assert len(parse_sweep("1e-3:1e-1")) == 5
        assert parse_sweep("0.1:0.2:1") == [0.1]

    @pytest.mark.parametrize("grid_spec", ["1e-2", "0:1e-2:3", "1e-2:1e-3:0"])
    def test_invalid_sweep(self, grid_spec):
        with pytest.raises(ModelConfigError):
            parse_sweep(grid_spec)

    def test_maturities(self):
        assert parse_maturities(["0.1", "0.05"]) == [0.1, 0.05]
        assert parse_maturities(["0.1"], "1e-2:1e-4:3")[0] == 0.1
        assert parse_maturities() == []

        with pytest.raises(ModelConfigError):
            parse_maturities(["-0.1"])

    def test_fd_step(self, ini_file):
        assert get_fd_step() == DEFAULT_FD_STEP
        assert get_fd_step(ini_file) == 2e-3


class TestModels:
    def test_preset(self):
        assert get_model("nig") == PRESETS["nig"]
        assert get_model(" NIG ") == PRESETS["nig"]

    def test_model_file(self, tmp_path):
        path = tmp_path / "nig.json"
        path.write_text(
            json.dumps(
                {"model": "nig", "params": {"alpha": 5, "beta": 1, "delta_nig": 2}}
            )
        )
        assert get_model(str(path)) == NIG(alpha=5.0, beta=1.0, delta=2.0)

    def test_overrides(self):
        model = get_model("nig", ["beta=-0.5", "drift=martingale"])
        assert model.beta == -0.5
        assert model.drift == MARTINGALE

    def test_parse_overrides(self):
        assert parse_param_overrides(["alpha=3", "drift=0.1"]) == {
            "alpha": 3.0,
            "drift": 0.1,
        }
        assert parse_param_overrides(None) == {}

    @pytest.mark.parametrize("params", [["alpha"], ["=3"], ["alpha=x"]])
    def test_invalid_overrides(self, params):
        with pytest.raises(ModelConfigError):
            parse_param_overrides(params)

    def test_unknown_model(self):
        with pytest.raises(ModelConfigError):
            get_model("heston")

        with pytest.raises(ModelConfigError):
            get_model(None)


class TestRunConfig:
    def test_figure_maturities(self):
        run = get_run_config("kou")
        assert run.maturities == FIGURE_MATURITIES["kou"]
        assert run.cfg.abs_tol == 1e-10

    def test_flags(self, ini_file):
        run = get_run_config(
            "nig",
            param=["delta=1.5"],
            T=["0.2"],
            grid="-0.1:0.1:3",
            ini_file=ini_file,
            abs_tol="1e-8",
        )
        assert run.model.delta == 1.5
        assert run.maturities == [0.2]
        assert run.grid == pytest.approx([-0.1, 0.0, 0.1])
        assert run.cfg.abs_tol == 1e-8
        assert run.cfg.contour_a == 0.75

    def test_no_maturity(self):
        with pytest.raises(ModelConfigError):
            get_run_config("merton")


class TestEnv:
    def test_threads(self, monkeypatch):
        assert get_num_threads() >= 1

        monkeypatch.setenv(THREADS_ENV_VAR, "3")
        assert get_num_threads() == 3

        for value in ["0", "many"]:
            monkeypatch.setenv(THREADS_ENV_VAR, value)
            with pytest.raises(ModelConfigError):
                get_num_threads()

    def test_log_level(self, monkeypatch):
        assert get_log_level() == "WARNING"

        monkeypatch.setenv(LOG_LEVEL_ENV_VAR, "debug")
        assert get_log_level() == "DEBUG"
