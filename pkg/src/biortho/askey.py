"""Expansion of P_n(e^{i theta/n}) in powers of i theta / n.

Coefficient j is a finite sum over compositions j = i1 + i2 + i3 of products of
generalized Bernoulli coefficients and a confluent 1F1 evaluated at i theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .cnum import ln_gamma, ln_gamma_real, pochhammer
from .errors import RegionError
from .hyp import Params, bernoulli_coefficients, f11

_RADIUS = 1.5 * math.pi
_SAMPLES = 4096
_ANGLE_TOL = 1e-12
_EPS = 2.0**-52


@dataclass(frozen=True)
class AskeyRequest:
    n: int
    theta: float
    k: int
    params: Params

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if not -math.pi <= self.theta < math.pi:
            raise ValueError("theta must lie in [-pi, pi)")
        if not self.params.in_omega0:
            raise RegionError("the expansion needs Re(alpha+beta) > -1 and Re(alpha-beta) > 0")


@dataclass(frozen=True)
class AskeyResult:
    """``remainder_bound`` is the closed-form truncation bound.

    ``roundoff_bound`` estimates the floating-point error in ``value`` and in a
    double-precision evaluation of P_n; it matters only once the truncation
    bound drops to the level of machine precision.
    """

    value: complex
    remainder_bound: float
    roundoff_bound: float

    @property
    def certified_bound(self) -> float:
        return self.remainder_bound + self.roundoff_bound


class _Coefficients:
    """Bernoulli tables for one parameter pair, up to a given order."""

    def __init__(self, params: Params, order: int):
        al, be = params.alpha, params.beta
        self.params = params
        self.b1 = bernoulli_coefficients(order, -al - be, al - be)
        self.b2 = bernoulli_coefficients(order, -al + be + 1, 0)
        self.b3 = bernoulli_coefficients(order, 2 * al, 0)

    def term(self, j: int, theta: float) -> tuple[complex, float]:
        """Coefficient j and the sum of moduli of its pieces."""
        al, be = self.params.alpha, self.params.beta
        x = 1j * theta
        total = 0j
        size = 0.0
        for i1 in range(j + 1):
            for i2 in range(j - i1 + 1):
                i3 = j - i1 - i2
                weight = (
                    self.b1[i1]
                    * self.b2[i2]
                    * self.b3[i3]
                    * pochhammer(al + be + 1, i1)
                    * pochhammer(al - be, i2)
                    / pochhammer(2 * al + 1, i1 + i2)
                )
                piece = weight * f11(1 + al + be + i1, 1 + 2 * al + i1 + i2, x)
                total += piece
                size += abs(piece)
        return total, size


def askey_term(j: int, theta: float, params: Params) -> complex:
    """Coefficient of (i theta / n)^j; independent of n."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    return _Coefficients(params, j).term(j, float(theta))[0]


def _ln_circle_modulus(phi, d: complex):
    v = _RADIUS * np.exp(1j * np.asarray(phi))
    return np.real(v * d) + np.log(_RADIUS) - np.log(np.abs(np.expm1(v)))


def max_circle(params: Params) -> float:
    """max over |v| = 3 pi/2 of |e^{v(a-b)} v / (e^v - 1)|."""
    d = params.alpha - params.beta
    step = 2 * math.pi / _SAMPLES
    phi = np.arange(_SAMPLES) * step - math.pi
    vals = _ln_circle_modulus(phi, d)
    i = int(np.argmax(vals))
    centre = phi[i]
    res = minimize_scalar(
        lambda a: -float(_ln_circle_modulus(a, d)),
        bracket=(centre - step, centre, centre + step),
        method="golden",
        tol=_ANGLE_TOL,
    )
    best = max(vals[i], -res.fun)
    return math.exp(best)


def _gamma_factor(params: Params) -> float:
    al, be = params.alpha, params.beta
    return math.exp(
        ln_gamma_real((al + be + 1).real)
        + ln_gamma_real((al - be).real)
        - ln_gamma(al + be + 1).real
        - ln_gamma(al - be).real
    )


def askey_remainder_bound(req: AskeyRequest, circle_max: float | None = None) -> float:
    """Truncation bound after the (i theta/n)^k term.

    Uses |theta| in the geometric-tail factor: the tail sum of |2 theta/(3 n pi)|^j
    only depends on the modulus of theta.
    """
    th = abs(req.theta)
    if th == 0:
        return 0.0
    cm = max_circle(req.params) if circle_max is None else circle_max
    scale = 3 * req.n * math.pi
    return (
        _gamma_factor(req.params)
        * (2 * th / (scale - 2 * th))
        * (2 * th / scale) ** req.k
        * cm
    )


def askey_expand(req: AskeyRequest) -> AskeyResult:
    coeffs = _Coefficients(req.params, req.k)
    x = 1j * req.theta / req.n
    value = 0j
    size = 0.0
    for j in range(req.k + 1):
        c, s = coeffs.term(j, req.theta)
        value += c * x**j
        size += s * abs(x) ** j
    # 1F1 sums and Bernoulli tables each carry a few ulps; the reference
    # polynomial value is of the same size as the leading coefficient
    roundoff = 16 * _EPS * (size + abs(value))
    return AskeyResult(
        value=value,
        remainder_bound=askey_remainder_bound(req),
        roundoff_bound=roundoff,
    )


__all__ = [
    "AskeyRequest",
    "AskeyResult",
    "askey_term",
    "max_circle",
    "askey_remainder_bound",
    "askey_expand",
]
