"""Certified numerics for the Askey bi-orthogonal system on the unit circle."""

from .askey import AskeyRequest, AskeyResult, askey_expand, askey_remainder_bound, askey_term, max_circle
from .electro import (
    EnergyConfig,
    ZeroConfiguration,
    energy,
    energy_grad,
    minimize_energy,
    ode_residual,
    para_poly,
    roots_on_circle,
    stationarity_residual,
)
from .expansion import (
    ExpansionRequest,
    ExpansionResult,
    bound_xi,
    converge_P,
    expand_P,
    expand_Q,
    region_omega1,
    rp_direct,
    xi_exact,
)
from .hyp import Params, eval_P, eval_P_unit, eval_Q
from .quad import (
    biorthogonality_constant,
    circle_weight,
    contour_integral_P,
    euler_integral_P,
    inner_product,
    split_integrals,
)

__version__ = "0.1.0"

__all__ = [
    "AskeyRequest",
    "AskeyResult",
    "askey_expand",
    "askey_remainder_bound",
    "askey_term",
    "max_circle",
    "EnergyConfig",
    "ZeroConfiguration",
    "energy",
    "energy_grad",
    "minimize_energy",
    "ode_residual",
    "para_poly",
    "roots_on_circle",
    "stationarity_residual",
    "ExpansionRequest",
    "ExpansionResult",
    "bound_xi",
    "converge_P",
    "expand_P",
    "expand_Q",
    "region_omega1",
    "rp_direct",
    "xi_exact",
    "Params",
    "eval_P",
    "eval_P_unit",
    "eval_Q",
    "biorthogonality_constant",
    "circle_weight",
    "contour_integral_P",
    "euler_integral_P",
    "inner_product",
    "split_integrals",
]
