"""Two-asset European option pricing under Normal Tempered Stable Levy models."""

from ._core import (
    levy_density,
    martingale_exponent,
    mc_price,
    model_params,
    preset_names,
    price,
    price_point,
    quadrature_weights,
    variance_of_l,
)

__all__ = [
    "levy_density",
    "martingale_exponent",
    "mc_price",
    "model_params",
    "preset_names",
    "price",
    "price_point",
    "quadrature_weights",
    "variance_of_l",
]
