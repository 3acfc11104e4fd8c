import json
import numpy as np
import pytest
from levysmile.util.errors import (
    BranchCut,
    ModelConfigError,
    MomentExplosion,
    StripViolation,
)
from levysmile.util.models import (
    CGMY,
    MARTINGALE,
    NIG,
    BlackScholes,
    Kou,
    Meixner,
    Merton,
    ProfileKind,
    VarianceGamma,
    Variation,
    asymptotic_profile,
    critical_moments,
    exponent,
    gamma_neg,
    load_model,
    martingale_drift,
    mgf,
    model_to_dict,
    parse_model,
    psi,
    resolve_drift,
    variation,
    with_drift,
    with_overrides,
)
from levysmile.util.presets import PRESETS
from levysmile.util.verify import random_model
from math import pi, sqrt
from os.path import dirname, join, realpath

ALL_PRESETS = sorted(PRESETS)
MODELS_DIR = join(dirname(dirname(realpath(__file__))), "models")


class TestConstruction:
    @pytest.mark.parametrize(
        "cls,kwargs",
        [
            (BlackScholes, {"sigma": 0.0}),
            (Merton, {"sigma": 0.2, "lam": -1.0, "delta": 0.1, "mu": 0.0}),
            (Kou, dict(sigma=1, lam=1, p=0.5, lambda_plus=1.0, lambda_minus=2)),
            (Kou, dict(sigma=1, lam=1, p=1.0, lambda_plus=3, lambda_minus=2)),
            (CGMY, {"C": 1.0, "G": 5.0, "M": 1.0, "Y": 0.5}),
            (CGMY, {"C": 1.0, "G": 5.0, "M": 5.0, "Y": 1.0}),
            (VarianceGamma, {"sigma": 0.2, "nu": 0.0, "theta": 0.0}),
            (NIG, {"alpha": 3.0, "beta": 2.0, "delta": 1.0}),
            (NIG, {"alpha": 8.5, "beta": 2.0, "delta": 0.0}),
            (Meixner, {"a_bar": 3.0, "b_bar": 0.5, "d_bar": 1.0}),
            (Meixner, {"a_bar": 0.3, "b_bar": 3.5, "d_bar": 1.0}),
        ],
    )
    def test_invalid_parameters(self, cls, kwargs):
        with pytest.raises(ModelConfigError):
            cls(**kwargs)

    def test_invalid_drift(self):
        with pytest.raises(ModelConfigError):
            BlackScholes(sigma=0.2, drift="neutral")

        with pytest.raises(ModelConfigError):
            BlackScholes(sigma=0.2, drift=float("nan"))

    def test_drift_policy(self):
        assert BlackScholes(sigma=0.2).is_martingale
        assert BlackScholes(sigma=0.2, drift="Martingale").drift == MARTINGALE

        model = BlackScholes(sigma=0.2, drift=0.5)
        assert not model.is_martingale
        assert resolve_drift(model) == 0.5


class TestMartingaleDrift:
    def test_kou_jump_constant(self, kou):
        # psi(1) / sigma with sigma = 1
        assert psi(kou, 1.0).real / kou.sigma == pytest.approx(-0.654985, abs=1e-5)

    def test_nig(self, nig):
        assert resolve_drift(nig) == pytest.approx(-0.339206, abs=1e-6)

    def test_cgmy(self, cgmy):
        assert resolve_drift(cgmy) == pytest.approx(-0.080280, abs=1e-5)

    def test_merton(self, merton):
        assert resolve_drift(merton) == pytest.approx(0.0706272, abs=1e-6)

    def test_meixner(self, meixner):
        assert resolve_drift(meixner) == pytest.approx(0.053145, abs=1e-5)

    def test_black_scholes(self, bs):
        assert resolve_drift(bs) == pytest.approx(-0.02)

    def test_vg_preset_has_zero_drift(self, vg):
        assert abs(resolve_drift(vg)) < 1e-12

    @pytest.mark.parametrize("name", ALL_PRESETS)
    def test_forward_is_one(self, name):
        model = PRESETS[name]
        for T in [1e-4, 0.1, 1.0, 10.0]:
            assert abs(mgf(model, 1.0, T) - 1.0) < 1e-12

    @pytest.mark.parametrize("name", ALL_PRESETS)
    def test_psi_vanishes_at_zero(self, name):
        assert abs(psi(PRESETS[name], 0.0)) < 1e-14

    def test_vg_moment_explosion(self):
        model = VarianceGamma(sigma=0.2, nu=0.5, theta=3.0)
        with pytest.raises(MomentExplosion):
            resolve_drift(model)

    def test_explicit_drift_skips_solve(self):
        model = VarianceGamma(sigma=0.2, nu=0.5, theta=3.0, drift=0.1)
        assert resolve_drift(model) == 0.1

    def test_martingale_drift_ignores_explicit_drift(self, nig):
        explicit = with_drift(nig, 0.3)
        assert martingale_drift(explicit) == pytest.approx(resolve_drift(nig))
        assert resolve_drift(explicit) == 0.3

        with pytest.raises(MomentExplosion):
            martingale_drift(VarianceGamma(sigma=0.2, nu=0.5, theta=3.0, drift=0.1))

    def test_cgmy_drift_sign(self):
        # b < 0 exactly when M - 1 < G
        rng = np.random.default_rng(7)
        for _ in range(500):
            model = random_model("cgmy", rng)
            b = resolve_drift(model)
            if abs(b) < 1e-12:
                continue
            assert (b < 0) == (model.M - 1 < model.G)


class TestCriticalMoments:
    def test_vg(self, vg):
        strip = critical_moments(vg)
        assert strip.s_plus == pytest.approx((1 + sqrt(401)) / 2)
        assert strip.s_minus == pytest.approx((1 - sqrt(401)) / 2)

    def test_nig(self, nig):
        strip = critical_moments(nig)
        assert strip.s_plus == pytest.approx(6.5)
        assert strip.s_minus == pytest.approx(-10.5)

    def test_kou(self, kou):
        strip = critical_moments(kou)
        assert (strip.s_minus, strip.s_plus) == (-9.0, 7.11)

    def test_meixner(self, meixner):
        strip = critical_moments(meixner)
        assert strip.s_plus == pytest.approx((pi + 0.5) / 0.3)
        assert strip.s_minus == pytest.approx((-pi + 0.5) / 0.3)

    def test_unbounded(self, merton, bs):
        for model in [merton, bs]:
            strip = critical_moments(model)
            assert not strip.bounded_plus
            assert not strip.bounded_minus


def random_strip_points(model, rng, count):
    strip = critical_moments(model)
    lo, hi = max(strip.s_minus, -5.0), min(strip.s_plus, 5.0)
    a = lo + (hi - lo) * rng.uniform(0.05, 0.95, count)
    y = rng.uniform(-50.0, 50.0, count)
    return a, y


class TestStrip:
    @pytest.mark.parametrize("name", ALL_PRESETS)
    def test_modulus_bound(self, name):
        model = PRESETS[name]
        rng = np.random.default_rng(11)
        a, y = random_strip_points(model, rng, 1000)
        T = rng.uniform(1e-3, 1.0, 1000)
        for a_i, y_i, T_i in zip(a, y, T):
            bound = mgf(model, a_i, T_i).real
            assert abs(mgf(model, a_i + 1j * y_i, T_i)) <= bound * (1 + 1e-12)

    @pytest.mark.parametrize("name", ALL_PRESETS)
    def test_conjugate_symmetry(self, name):
        model = PRESETS[name]
        a, y = random_strip_points(model, np.random.default_rng(3), 1000)
        s = a + 1j * y
        assert np.allclose(
            psi(model, np.conj(s)), np.conj(psi(model, s)), rtol=1e-12, atol=1e-12
        )

    @pytest.mark.parametrize("name", ["vg", "kou", "nig", "cgmy", "meixner"])
    def test_critical_moments_bracket_strip(self, name):
        model = PRESETS[name]
        strip = critical_moments(model)
        eps = 1e-6
        for s in [strip.s_minus + eps, strip.s_plus - eps]:
            assert np.isfinite(psi(model, s))

        for s in [strip.s_minus - eps, strip.s_plus + eps]:
            with pytest.raises(StripViolation):
                psi(model, s)


class TestExponent:
    def test_outside_strip(self, nig, cgmy):
        with pytest.raises(StripViolation):
            psi(nig, 6.5 + 1j)

        with pytest.raises(StripViolation):
            exponent(cgmy, -5.5)

    def test_vg_branch_cut(self, vg):
        with pytest.raises(BranchCut):
            psi(vg, 11.0)

    def test_arrays(self, nig):
        s = 0.5 + 1j * np.linspace(0, 100, 11)
        values = psi(nig, s)
        assert values.shape == s.shape
        assert values[3] == pytest.approx(psi(nig, s[3]))

    def test_bs_exponent(self, bs):
        s = 0.3 + 2j
        expected = -0.02 * s + 0.5 * 0.04 * s * s
        assert exponent(bs, s) == pytest.approx(expected)

    def test_meixner_large_imaginary_part(self, meixner):
        # Re psi(a + iy) ~ -a_bar d_bar y
        value = psi(meixner, 1.0 + 1e4j)
        assert np.isfinite(value)
        assert value.real / 1e4 == pytest.approx(-0.3, rel=1e-3)

    def test_mgf_needs_positive_maturity(self, nig):
        with pytest.raises(ModelConfigError):
            mgf(nig, 1.0, 0.0)


class TestAsymptoticProfile:
    def test_gamma_neg(self):
        assert gamma_neg(0.5) == pytest.approx(-2 * sqrt(pi))
        assert gamma_neg(0.3) < 0

    def test_cgmy(self, cgmy):
        profile = asymptotic_profile(cgmy)
        assert profile.kind == ProfileKind.POWER_LAW
        assert profile.eta == 0.5
        assert profile.c1 == pytest.approx(5.013257, abs=1e-6)
        assert profile.variation == Variation.FINITE

    def test_nig_and_meixner(self, nig, meixner):
        assert asymptotic_profile(nig).c1 == 1.1
        assert asymptotic_profile(meixner).c1 == pytest.approx(0.3)
        assert variation(nig) == Variation.INFINITE
        assert variation(meixner) == Variation.INFINITE

    def test_vg(self, vg):
        profile = asymptotic_profile(vg)
        assert profile.kind == ProfileKind.LOGARITHMIC
        assert profile.variation == Variation.FINITE

    def test_jump_diffusions(self, bs, merton, kou):
        for model in [bs, merton, kou]:
            profile = asymptotic_profile(model)
            assert profile.kind == ProfileKind.JUMP_DIFFUSION
            assert profile.sigma == model.sigma

    def test_power_law_growth(self, cgmy):
        # Re psi(a + iy) / y^Y -> -c1
        profile = asymptotic_profile(cgmy)
        y = 1e8
        assert psi(cgmy, 1.0 + 1j * y).real / y**0.5 == pytest.approx(
            -profile.c1, rel=1e-3
        )


class TestModelFiles:
    def test_parse_with_aliases(self):
        model = parse_model(
            {
                "model": "NIG",
                "params": {"alpha": 8.5, "beta": 2, "delta_nig": 1.1},
                "drift": "martingale",
            }
        )
        assert model == NIG(alpha=8.5, beta=2.0, delta=1.1)

        model = parse_model(
            {
                "model": "variance_gamma",
                "params": {"sigma_vg": 0.2, "nu": 1, "theta": 0},
            }
        )
        assert isinstance(model, VarianceGamma)

    def test_explicit_drift(self):
        model = parse_model(
            {
                "model": "cgmy",
                "params": {"C": 1, "G": 5, "M": 5, "Y": 0.5},
                "drift": 0.3,
            }
        )
        assert model.drift == 0.3

    @pytest.mark.parametrize(
        "model_dict",
        [
            {"model": "heston", "params": {}},
            {"model": "nig", "params": {"alpha": 8.5, "beta": 2.0}},
            {"model": "nig", "params": {"alpha": 8.5, "beta": 2, "delta": 1, "x": 1}},
            {"model": "nig", "params": [8.5, 2.0, 1.1]},
            ["nig"],
        ],
    )
    def test_parse_errors(self, model_dict):
        with pytest.raises(ModelConfigError):
            parse_model(model_dict)

    @pytest.mark.parametrize("name", ALL_PRESETS)
    def test_dict_round_trip(self, name):
        model = PRESETS[name]
        assert parse_model(model_to_dict(model)) == model

    def test_output_names(self, merton, cgmy):
        assert "lambda" in model_to_dict(merton)["params"]
        assert model_to_dict(cgmy)["params"]["m"] == 5.0

    def test_load_model(self, tmp_path):
        model_file = tmp_path / "kou.json"
        model_file.write_text(
            json.dumps(
                {
                    "model": "kou",
                    "params": {
                        "sigma": 1.0,
                        "lambda": 15.5,
                        "p": 0.219,
                        "lambda_plus": 7.11,
                        "lambda_minus": 9.0,
                    },
                }
            )
        )
        assert load_model(str(model_file)) == PRESETS["kou"]

    @pytest.mark.parametrize(
        "name", ["cgmy", "kou", "meixner", "merton", "nig", "vg"]
    )
    def test_shipped_model_files(self, name):
        model_file = join(MODELS_DIR, "{}.json".format(name))
        assert load_model(model_file) == PRESETS[name]

    def test_load_errors(self, tmp_path):
        with pytest.raises(ModelConfigError):
            load_model(str(tmp_path / "missing.json"))

        model_file = tmp_path / "broken.json"
        model_file.write_text("{not json")
        with pytest.raises(ModelConfigError):
            load_model(str(model_file))

    def test_overrides(self, nig):
        model = with_overrides(nig, {"beta": -0.5, "drift": 0.1})
        assert model.beta == -0.5
        assert model.drift == 0.1
        assert model.alpha == nig.alpha

        with pytest.raises(ModelConfigError):
            with_overrides(nig, {"gamma": 1.0})

    def test_with_drift(self, nig):
        assert with_drift(nig, 0.2).drift == 0.2
        assert with_drift(with_drift(nig, 0.2), MARTINGALE) == nig
