"""Quadrature rules and the integral representations used as oracles.

Rules live on (0, 1). Each rule also stores ``complements = 1 - nodes``
computed without cancellation, so integrands with a singularity at t = 1
can be evaluated accurately right up to the endpoint.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit

from .cnum import beta_fn, clog, cpow, ln_gamma, safe_exp
from .errors import DomainError, IntegrandError, RayError, RegionError
from .hyp import Params

# pi*sinh(x) reaches ~690 here, so the outermost nodes sit ~1e-300 from the ends
_TS_XMAX = 6.085
DEFAULT_TS_NODES = 401
DEFAULT_GL_NODES = 256


def _env_nodes(default: int) -> int:
    raw = os.environ.get("BIORTHO_QUAD_NODES")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"BIORTHO_QUAD_NODES must be an integer, got {raw!r}") from exc
    if value < 2:
        raise ValueError("BIORTHO_QUAD_NODES must be >= 2")
    return value


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    complements: np.ndarray

    def __post_init__(self):
        if self.kind not in ("gauss_legendre", "tanh_sinh"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if len(self.nodes) < 2:
            raise ValueError("a rule needs at least two nodes")
        for arr in (self.nodes, self.weights, self.complements):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.nodes)


def gauss_legendre(npoints: int | None = None) -> QuadratureRule:
    """Gauss-Legendre rule mapped to (0, 1)."""
    npoints = _env_nodes(DEFAULT_GL_NODES) if npoints is None else npoints
    x, w = np.polynomial.legendre.leggauss(npoints)
    return QuadratureRule(
        nodes=(1.0 + x) / 2.0,
        weights=w / 2.0,
        kind="gauss_legendre",
        complements=(1.0 - x) / 2.0,
    )


def tanh_sinh(npoints: int | None = None) -> QuadratureRule:
    """Double-exponential rule on (0, 1), t = 1/(1 + exp(-pi sinh x)).

    The trapezoidal grid spans |x| <= 6.085 with ``npoints`` nodes; nodes whose
    weight underflows to zero are dropped.
    """
    npoints = _env_nodes(DEFAULT_TS_NODES) if npoints is None else npoints
    x = np.linspace(-_TS_XMAX, _TS_XMAX, npoints)
    h = x[1] - x[0]
    u = np.pi * np.sinh(x)
    t = expit(u)
    s = expit(-u)
    w = h * np.pi * np.cosh(x) * t * s
    keep = (w > 0) & (t > 0) & (s > 0)
    return QuadratureRule(nodes=t[keep], weights=w[keep], kind="tanh_sinh", complements=s[keep])


def _check_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise IntegrandError("integrand produced a non-finite value")


def integrate_01(f: Callable, rule: QuadratureRule) -> complex:
    """Weighted sum of ``f`` at the rule's nodes; ``f`` is called on the node array."""
    values = np.asarray(f(rule.nodes), dtype=complex)
    _check_finite(values)
    return complex(np.dot(rule.weights, values))


def integrate_01_pair(g: Callable, rule: QuadratureRule) -> complex:
    """Like :func:`integrate_01` but calls ``g(t, 1 - t)`` with an accurate complement."""
    values = np.asarray(g(rule.nodes, rule.complements), dtype=complex)
    _check_finite(values)
    return complex(np.dot(rule.weights, values))


def _require_omega0(params: Params) -> None:
    if not params.in_omega0:
        raise RegionError(
            f"(alpha, beta) = ({params.alpha}, {params.beta}) needs "
            "Re(alpha+beta) > -1 and Re(alpha-beta) > 0"
        )


def _norm(params: Params) -> complex:
    """Gamma(2a+1) / (Gamma(a+b+1) Gamma(a-b))."""
    al, be = params.alpha, params.beta
    return safe_exp(ln_gamma(2 * al + 1) - ln_gamma(al + be + 1) - ln_gamma(al - be))


def euler_integral_P(n: int, z, params: Params, rule: QuadratureRule | None = None) -> complex:
    """P_n from its Euler integral over (0, 1)."""
    _require_omega0(params)
    rule = rule or tanh_sinh()
    z = complex(z)
    al, be = params.alpha, params.beta

    def integrand(t, s):
        return cpow(t, al + be) * cpow(s, al - be - 1) * (1 - t * (1 - z)) ** n

    return _norm(params) * integrate_01_pair(integrand, rule)


def _side_pow(r, a, side: float):
    """Principal power, except that points on the negative axis take the boundary
    value from the half-plane named by ``side`` (+1 upper, -1 lower)."""
    a = complex(a)
    out = cpow(r, a, zero_ok=True)
    if side < 0:
        on_cut = (np.imag(r) == 0) & (np.real(r) < 0)
        if np.any(on_cut):
            lower = np.exp(a * (np.log(np.abs(np.where(on_cut, r, 1.0))) - 1j * np.pi))
            out = np.where(on_cut, lower, out)
    return out


def _integrate_with_break(h: Callable, rule: QuadratureRule, t0: float | None) -> complex:
    """Integrate ``h(t, 1 - t, t - t0)`` over (0, 1), splitting at an interior point t0.

    Both pieces are mapped onto the rule so that the algebraic singularity at
    t0 sits at an endpoint; the offset ``t - t0`` is passed exactly.
    """
    if t0 is None:
        return integrate_01_pair(lambda t, s: h(t, s, None), rule)
    x, xc, w = rule.nodes, rule.complements, rule.weights
    left = h(t0 * x, 1 - t0 * x, -t0 * xc)
    right = h(t0 + (1 - t0) * x, (1 - t0) * xc, (1 - t0) * x)
    for v in (left, right):
        _check_finite(np.asarray(v))
    return complex(t0 * np.dot(w, left) + (1 - t0) * np.dot(w, right))


def _break_point(star: complex) -> float | None:
    """Where to split (0, 1) for an integrand singular at ``star``: its real part,
    when ``star`` lies on or close to the interval."""
    if 0 < star.real < 1 and abs(star.imag) < 0.5:
        return star.real
    return None


def split_integrals(n: int, z, params: Params, rule: QuadratureRule | None = None):
    """The two summands of the split representation of P_n, prefactors included.

    Returns ``(I1, I2)`` with ``P_n = norm * (I1 + I2)`` where norm is
    Gamma(2a+1) / (Gamma(a-b) Gamma(a+b+1)). For real z > 1 (and real z in
    (0, 1)) one of the integrands runs along its branch cut over part of
    (0, 1); the boundary value is taken from the lower half-plane, which is
    the side that makes the identity hold with principal-branch prefactors.
    """
    _require_omega0(params)
    z = complex(z)
    if z == 1:
        raise DomainError("split representation excludes z = 1")
    rule = rule or tanh_sinh()
    al, be = params.alpha, params.beta
    ab, amb = al + be, al - be
    real_z = z.imag == 0
    side1 = -1.0 if (real_z and z.real > 1) else 0.0
    side2 = -1.0 if (real_z and 0 < z.real < 1) else 0.0

    if z == 0:
        i1 = 0j
    else:
        # 1 - z t vanishes at t = 1/z
        star1 = 1 / z
        t1 = _break_point(star1)

        def g1(t, s, d):
            num = -z * (d - 1j * star1.imag) if d is not None else 1 - z * t
            return t**n * cpow(s, amb - 1) * _side_pow(num / (1 - z), ab, side1)

        pre1 = cpow(z, n + amb) * cpow(z - 1, -amb)
        i1 = pre1 * _integrate_with_break(g1, rule, t1)

    # z - t vanishes at t = z
    t2 = _break_point(z)

    def g2(t, s, d):
        num = -(d - 1j * z.imag) if d is not None else z - t
        return t**n * cpow(s, ab) * _side_pow(num / (z - 1), amb - 1, side2)

    i2 = cpow(1 - z, -ab - 1) * _integrate_with_break(g2, rule, t2)
    return i1, i2


def split_norm(params: Params) -> complex:
    """The common factor in front of (I1 + I2)."""
    return _norm(params)


def contour_integral_P(n: int, z, params: Params, rule: QuadratureRule | None = None) -> complex:
    """P_n from the representation with the substitution 1 - t(1-z) = z^u."""
    _require_omega0(params)
    z = complex(z)
    if z in (0, 1):
        raise DomainError("contour representation excludes z = 0 and z = 1")
    rule = rule or tanh_sinh()
    al, be = params.alpha, params.beta
    lz = clog(z)

    def integrand(u, s):
        zu = np.exp(u * lz)
        # z^u - 1 and z - z^u without cancellation near the endpoints
        a = np.expm1(u * lz) / (z - 1)
        b = -z * np.expm1(-s * lz) / (z - 1)
        return cpow(a, al + be) * cpow(b, al - be - 1) * np.exp(n * u * lz) * zu * lz / (z - 1)

    return _norm(params) * integrate_01_pair(integrand, rule)


def biorthogonality_constant(n: int, params: Params) -> complex:
    """Gamma(2a+1) / (Gamma(a+b+1) Gamma(a-b+1)) * n! / (2a+1)_n."""
    al, be = params.alpha, params.beta
    lead = ln_gamma(2 * al + 1) - ln_gamma(al + be + 1) - ln_gamma(al - be + 1)
    lead += ln_gamma(n + 1) + ln_gamma(2 * al + 1) - ln_gamma(2 * al + 1 + n)
    return safe_exp(lead)


def circle_weight(theta, params: Params):
    """(1 - e^{i theta})^{a+b} (1 - e^{-i theta})^{a-b}, each factor principal."""
    al, be = params.alpha, params.beta
    # 1 - e^{i theta} = -2i sin(theta/2) e^{i theta/2}, exact near theta = 0
    one_minus = -2j * np.sin(np.asarray(theta) / 2) * np.exp(1j * np.asarray(theta) / 2)
    return cpow(one_minus, al + be, zero_ok=True) * cpow(np.conj(one_minus), al - be, zero_ok=True)


def inner_product(n: int, m: int, params: Params, npoints: int | None = None) -> complex:
    """(1/2pi) int_{-pi}^{pi} P_n(e^{it}) Q_m(e^{-it}) w(t) dt.

    The weight has a phase jump and an |t|^{2 Re a} kink at t = 0, so the
    interval is split there and each half is integrated with the
    double-exponential rule.
    """
    if params.alpha.real <= -0.5:
        raise RegionError("inner product needs Re(alpha) > -1/2")
    if npoints is None:
        npoints = max(_env_nodes(DEFAULT_TS_NODES), 32 * (n + m + 4) + 1)
    rule = tanh_sinh(npoints)
    total = 0j
    for sign in (1.0, -1.0):
        # theta = sign * pi * t on each half; dtheta = pi dt
        theta = sign * np.pi * rule.nodes
        e = np.exp(1j * theta)
        pn = _poly_eval_array(n, e, params, reflect=False)
        qm = _poly_eval_array(m, np.conj(e), params, reflect=True)
        values = pn * qm * circle_weight(theta, params)
        _check_finite(values)
        total += np.pi * complex(np.dot(rule.weights, values))
    return total / (2 * np.pi)


def _poly_eval_array(n: int, zs: np.ndarray, params: Params, reflect: bool) -> np.ndarray:
    """P_n (or Q_n) at many points via the monomial expansion in 1 - z.

    Accurate for the modest degrees used on the unit circle, where
    |1 - z| <= 2.
    """
    p = params.reflected() if reflect else params
    al, be = p.alpha, p.beta
    a, c = al + be + 1, 2 * al + 1
    coef = [1 + 0j]
    for k in range(n):
        coef.append(coef[-1] * (k - n) * (a + k) / ((c + k) * (k + 1)))
    x = 1 - zs
    out = np.zeros_like(zs, dtype=complex)
    for ck in reversed(coef):
        out = out * x + ck
    return out


def rp_integral(u, psi, gamma_, p: int, rule: QuadratureRule | None = None) -> complex:
    """Binomial remainder r_p(u; psi, gamma) from its Beta-type integral.

    Valid for Re(gamma) > -1, gamma != 0, p >= floor(Re(gamma)), and u off
    the ray where 1 + psi*u <= 0.
    """
    u, psi, gamma_ = complex(u), complex(psi), complex(gamma_)
    if gamma_.real <= -1 or gamma_ == 0:
        raise DomainError("integral form needs Re(gamma) > -1 and gamma != 0")
    if p < math.floor(gamma_.real):
        raise DomainError("integral form needs p >= floor(Re(gamma))")
    w = u * psi
    if w.imag == 0 and w.real <= -1:
        raise RayError(f"1 + t*u*psi vanishes on [0, 1] for u*psi = {w}")
    rule = rule or tanh_sinh()
    lead = np.sin(np.pi * (gamma_ - p)) / np.pi
    if lead == 0:
        return 0j

    a = p - gamma_ + 1
    g1 = 1 / (1 + w)

    # both endpoint singularities can be nearly non-integrable, so the linear
    # interpolant of 1/(1 + t w) is integrated exactly against t^(a-1) s^gamma
    # and only the remainder, which vanishes at both ends, is summed
    star = -1 / w if w != 0 else complex(math.inf)
    t0 = _break_point(star)

    def integrand(t, s, d):
        # 1 + t w = w (t - star), taken from the exact offset near the pole
        lin = 1 + t * w if d is None else w * (d - 1j * star.imag)
        rest = 1 / lin - s - t * g1
        return cpow(t, a - 1) * cpow(s, gamma_) * rest

    exact = beta_fn(a, gamma_ + 2) + g1 * beta_fn(a + 1, gamma_ + 1)
    return complex(lead * (exact + _integrate_with_break(integrand, rule, t0)))


__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "tanh_sinh",
    "integrate_01",
    "integrate_01_pair",
    "euler_integral_P",
    "split_integrals",
    "split_norm",
    "contour_integral_P",
    "inner_product",
    "biorthogonality_constant",
    "circle_weight",
    "rp_integral",
]
