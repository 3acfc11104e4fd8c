"""
Reference parameter sets: the two figure models (Kou for a jump diffusion,
NIG for a pure-jump model) plus one example per remaining family
"""

from levysmile.util.errors import ModelConfigError
from levysmile.util.models import (
    CGMY,
    NIG,
    BlackScholes,
    Kou,
    Meixner,
    Merton,
    VarianceGamma,
)

PRESETS = {
    "blackscholes": BlackScholes(sigma=0.2),
    "merton": Merton(sigma=0.2, lam=1.0, delta=0.1, mu=-0.1),
    "kou": Kou(sigma=1.0, lam=15.5, p=0.219, lambda_plus=7.11, lambda_minus=9.0),
    "cgmy": CGMY(C=1.0, G=5.0, M=5.0, Y=0.5),
    "vg": VarianceGamma(sigma=0.2, nu=0.5, theta=-0.02),
    "nig": NIG(alpha=8.5, beta=2.0, delta=1.1),
    "meixner": Meixner(a_bar=0.3, b_bar=-0.5, d_bar=1.0),
}

# Maturities of the smile figures
FIGURE_MATURITIES = {
    "kou": [0.01, 0.005],
    "nig": [0.1, 0.05],
}


def get_preset(name):
    if name not in PRESETS:
        raise ModelConfigError(
            "Unrecognised preset '{}', must be one in: {}".format(
                name, sorted(PRESETS)
            )
        )

    return PRESETS[name]
