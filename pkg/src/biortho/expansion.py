"""Compound factorial-series expansion of P_n with certified remainder bounds.

P_n(z) = pre1 * (sum_k term1_k + xi1) + pre2 * (sum_k term2_k + xi2), where
pre1 carries z^(n+a-b) (z-1)^(b-a) and pre2 carries (1-z)^(-a-b-1). The
remainders xi1, xi2 are bounded in closed form by :func:`bound_xi`; their
exact values (for testing the bounds) come from :func:`xi_exact`.

Bounds are assembled in log space so that large n never overflows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .cnum import clog, cpow, gen_binom, ln_gamma, ln_gamma_real, pochhammer, safe_exp
from .errors import DomainError, NonConvergence, NumericOverflow, RayError, RegionError
from .hyp import Params, eval_P
from .quad import QuadratureRule, _break_point, _integrate_with_break, tanh_sinh

# Relative slack applied to the assembled bound to absorb floating-point roundoff.
BOUND_SLACK = 1e-12
MAX_CONVERGE_TERMS = 1000


class _Infinity:
    """Marker for the point at infinity accepted by :func:`m2`."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "POINT_AT_INFINITY"


POINT_AT_INFINITY = _Infinity()


def region_omega1(z) -> bool:
    """|z| < |z-1| and |z-1| > 1: where both series converge for fixed n."""
    z = complex(z)
    return abs(z) < abs(z - 1) and abs(z - 1) > 1


# ---------------------------------------------------------------------------
# binomial remainder


def _rp_series(w: complex, gamma_: complex, p: int) -> complex:
    # sum_{k>p} binom(gamma, k) w^(k-p-1), for |w| < 1/2
    term = gen_binom(gamma_, p + 1)
    total = term
    k = p + 1
    while True:
        term *= (gamma_ - k) / (k + 1) * w
        k += 1
        total += term
        if abs(term) <= 1e-17 * abs(total) or k > p + 200:
            return total


def _rp_scalar(w: complex, gamma_: complex, p: int) -> complex:
    if abs(w) < 0.5:
        return _rp_series(w, gamma_, p)
    partial = sum(gen_binom(gamma_, k) * w**k for k in range(p + 1))
    return (cpow(1 + w, gamma_, zero_ok=True) - partial) / w ** (p + 1)


def rp_direct(u, psi, gamma_, p: int) -> complex:
    """Remainder of the binomial series of (1 + psi u)^gamma after p+1 terms,
    divided by (psi u)^(p+1). Zero when psi or gamma vanishes.
    """
    u, psi, gamma_ = complex(u), complex(psi), complex(gamma_)
    if p < 0:
        raise ValueError("p must be nonnegative")
    if psi == 0 or gamma_ == 0:
        return 0j
    w = psi * u
    if w.imag == 0 and w.real <= -1:
        raise RayError(f"psi*u = {w} lies on the branch ray of (1 + psi u)^gamma")
    return _rp_scalar(w, gamma_, p)


def _rp_array(w: np.ndarray, gamma_: complex, p: int) -> np.ndarray:
    """Vectorised r_p in terms of w = psi*u; the series is used near w = 0."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < 0.5
    if np.any(small):
        ws = w[small]
        term = np.full(ws.shape, gen_binom(gamma_, p + 1))
        total = term.copy()
        k = p + 1
        while True:
            term = term * ((gamma_ - k) / (k + 1)) * ws
            k += 1
            total += term
            if np.all(np.abs(term) <= 1e-17 * np.abs(total)) or k > p + 200:
                break
        out[small] = total
    big = ~small
    if np.any(big):
        wb = w[big]
        partial = np.zeros_like(wb)
        for k in range(p, -1, -1):
            partial = partial * wb + gen_binom(gamma_, k)
        out[big] = (cpow(1 + wb, gamma_, zero_ok=True) - partial) / wb ** (p + 1)
    return out


# ---------------------------------------------------------------------------
# bound ingredients


def m1(z, gamma_) -> float:
    """e^{pi |Im g|} max(2^{Re g}, (1+|z|)^{Re g})."""
    z, gamma_ = complex(z), complex(gamma_)
    g = gamma_.real
    return math.exp(math.pi * abs(gamma_.imag)) * max(2.0**g, (1.0 + abs(z)) ** g)


def m2(z, q, gamma_) -> float:
    """e^{pi |Im g|} (|z|+1)^{1+Re g} / (|z-1| |z|^{Re g}) (1 + 2|(q+1)/(g+1)|).

    ``z`` may be :data:`POINT_AT_INFINITY`, where the z-dependent factor tends to 1.
    """
    q, gamma_ = complex(q), complex(gamma_)
    if gamma_ == -1:
        raise DomainError("m2 needs gamma != -1")
    tail = 1.0 + 2.0 * abs((q + 1) / (gamma_ + 1))
    scale = math.exp(math.pi * abs(gamma_.imag))
    if z is POINT_AT_INFINITY:
        return scale * tail
    z = complex(z)
    if z == 1:
        raise DomainError("m2 is undefined at z = 1")
    g = gamma_.real
    az = abs(z)
    if az == 0:
        # |z|^{-Re g} -> 0 for Re g < 0
        return 0.0 if g < 0 else math.inf
    return scale * (az + 1) ** (1 + g) / (abs(z - 1) * az**g) * tail


def binom_const(gamma_) -> float:
    """C with |binom(gamma, k)| < C / k^(1 + Re gamma) for all k >= 1, Re gamma > -1.

    The commonly quoted constant e^{|g|^2 + Re g} is too small for some
    -1 < Re g < 0 (e.g. g = -0.9 fails for every large k); bounding the
    harmonic sum from below instead adds the factor e^{1 + Re g} there.
    """
    gamma_ = complex(gamma_)
    return math.exp(abs(gamma_) ** 2 + gamma_.real + max(0.0, 1.0 + gamma_.real))


def _m3(p: int, gamma_, const: float) -> float:
    first = math.exp(-math.pi * gamma_.imag) * abs(p - gamma_ + 1) + 1.0 + p * const
    second = 1.0 + abs(cmath.sin(math.pi * gamma_) / (math.pi * (1 + gamma_.real)))
    return max(first, second)


def m3(p: int, gamma_) -> float:
    """The displayed m3, with the constant e^{|g|^2 + Re g}."""
    gamma_ = complex(gamma_)
    return _m3(p, gamma_, math.exp(abs(gamma_) ** 2 + gamma_.real))


def _m3_safe(p: int, gamma_) -> float:
    gamma_ = complex(gamma_)
    return _m3(p, gamma_, binom_const(gamma_))


def _ln_poch_real(x: float, k: int) -> float:
    return ln_gamma_real(x + k) - ln_gamma_real(x)


def _ln_gamma_lead(p: int, re_shift: float) -> float:
    """log of the Gamma factor leading the first bound.

    The derivation yields Gamma(p + 1 + s) while the closed form is commonly
    quoted with Gamma(p + s); the larger of the two keeps the bound valid
    under either reading.
    """
    return max(ln_gamma_real(p + re_shift), ln_gamma_real(p + 1 + re_shift))


def _c1(n: int, p: int, z: complex, params: Params) -> float:
    al, be = params.alpha, params.beta
    ab = al + be
    if ab.real >= 0:
        return m1(z / (1 - z), ab) + p * binom_const(ab) + 1
    amb_re = (al - be).real
    ratio = math.exp(
        ln_gamma_real(p + 1 - 2 * be.real)
        - ln_gamma_real(p + 1 + amb_re)
        + ln_gamma_real(n + p + 2 + amb_re)
        - ln_gamma_real(n + p + 2 - 2 * be.real)
    )
    return m2(z, p - 2 * be, ab) * ratio + _m3_safe(p, ab)


def _c2(n: int, p: int, z: complex, params: Params) -> float:
    al, be = params.alpha, params.beta
    g = al - be - 1
    if (al - be).real >= 1:
        return m1(1 / (z - 1), g) + p * binom_const(g) + 1
    ab_re = (al + be).real
    ratio = math.exp(
        ln_gamma_real(p + 2 * be.real + 3)
        - ln_gamma_real(p + ab_re + 2)
        + ln_gamma_real(n + p + 3 + ab_re)
        - ln_gamma_real(n + p + 2 * be.real + 4)
    )
    zinv = POINT_AT_INFINITY if z == 0 else 1 / z
    # the parameter of m3 is typeset as a-b+1 but the remainder being bounded
    # has exponent a-b-1; take the larger value so both readings are covered
    tail = max(_m3_safe(p, g), _m3_safe(p, g + 2))
    return m2(zinv, p + 2 * be + 2, g) * ratio + tail


def _ln_bound(which: int, n: int, p: int, z: complex, params: Params) -> float:
    al, be = params.alpha, params.beta
    if which == 1:
        if z == 0:
            return -math.inf
        s = (al - be).real
        c = _c1(n, p, z, params)
        return (
            _ln_gamma_lead(p, s)
            - ln_gamma(al - be).real
            + (p + 1) * math.log(abs(z / (1 - z)))
            + math.log(c)
            - _ln_poch_real(n + 1 + s, p + 1)
        )
    if which == 2:
        s = (al + be).real
        c = _c2(n, p, z, params)
        if c == 0:
            return -math.inf
        return (
            ln_gamma_real(p + 2 + s)
            - ln_gamma(al + be + 1).real
            - (p + 1) * math.log(abs(z - 1))
            + math.log(c)
            - _ln_poch_real(n + 2 + s, p + 1)
        )
    raise ValueError("which must be 1 or 2")


def _check_request(n: int, z: complex, params: Params) -> None:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if z == 1:
        raise DomainError("the expansion excludes z = 1")
    if not params.in_omega0:
        raise RegionError(
            f"(alpha, beta) = ({params.alpha}, {params.beta}) is outside "
            "Re(alpha+beta) > -1, Re(alpha-beta) > 0"
        )


def bound_xi(which: int, n: int, p: int, z, params: Params) -> float:
    """Closed-form upper bound for |xi_which|."""
    z = complex(z)
    _check_request(n, z, params)
    return math.exp(_ln_bound(which, n, p, z, params))


# ---------------------------------------------------------------------------
# terms and prefactors


def term1(k: int, n: int, z, params: Params) -> complex:
    z = complex(z)
    al, be = params.alpha, params.beta
    return (
        gen_binom(al + be, k)
        * (z / (1 - z)) ** k
        * pochhammer(al - be, k)
        / pochhammer(n + 1 + al - be, k)
    )


def term2(k: int, n: int, z, params: Params) -> complex:
    z = complex(z)
    al, be = params.alpha, params.beta
    return (
        gen_binom(al - be - 1, k)
        / (z - 1) ** k
        * pochhammer(al + be + 1, k)
        / pochhammer(n + 2 + al + be, k)
    )


def _terms(fn, count: int, n: int, z: complex, params: Params) -> list[complex]:
    # running products instead of recomputing each factor from scratch
    al, be = params.alpha, params.beta
    if fn is term1:
        g, ratio, a, b = al + be, z / (1 - z), al - be, n + 1 + al - be
    else:
        g, ratio, a, b = al - be - 1, 1 / (z - 1), al + be + 1, n + 2 + al + be
    out = [1 + 0j]
    t = 1 + 0j
    for k in range(count - 1):
        t *= (g - k) / (k + 1) * ratio * (a + k) / (b + k)
        out.append(t)
    return out


def ln_prefactor1(n: int, z, params: Params) -> complex:
    z = complex(z)
    al, be = params.alpha, params.beta
    return (
        ln_gamma(2 * al + 1)
        - ln_gamma(al + be + 1)
        + ln_gamma(n + 1)
        - ln_gamma(n + al - be + 1)
        + (n + al - be) * clog(z)
        + (be - al) * clog(z - 1)
    )


def ln_prefactor2(n: int, z, params: Params) -> complex:
    z = complex(z)
    al, be = params.alpha, params.beta
    return (
        ln_gamma(2 * al + 1)
        - ln_gamma(al - be)
        + ln_gamma(n + 1)
        - ln_gamma(n + al + be + 2)
        - (al + be + 1) * clog(1 - z)
    )


def _prefactor1(n: int, z: complex, params: Params) -> tuple[complex, float]:
    """(value, log modulus); z = 0 gives exactly zero."""
    if z == 0:
        return 0j, -math.inf
    ln = ln_prefactor1(n, z, params)
    return safe_exp(ln), ln.real


def _prefactor2(n: int, z: complex, params: Params) -> tuple[complex, float]:
    ln = ln_prefactor2(n, z, params)
    return safe_exp(ln), ln.real


# ---------------------------------------------------------------------------
# exact remainders


def _ln_inv_beta(n: int, b: complex) -> complex:
    # 1 / B(n+1, b)
    return ln_gamma(n + 1 + b) - ln_gamma(n + 1) - ln_gamma(b)


def _xi1_quad(n: int, p: int, z: complex, params: Params, rule: QuadratureRule) -> complex:
    al, be = params.alpha, params.beta
    if z == 0 or al + be == 0:
        return 0j
    psi = z / (1 - z)
    star = 1 / z

    def h(t, s, d):
        # psi * (1 - t) = (1 - z t)/(1 - z) - 1
        w = psi * s
        return t**n * cpow(s, p + al - be, zero_ok=True) * _rp_array(w, al + be, p)

    integral = _integrate_with_break(h, rule, _break_point(star))
    return safe_exp(_ln_inv_beta(n, al - be)) * psi ** (p + 1) * integral


def _xi2_quad(n: int, p: int, z: complex, params: Params, rule: QuadratureRule) -> complex:
    al, be = params.alpha, params.beta
    g = al - be - 1
    if g == 0:
        return 0j
    psi = 1 / (z - 1)

    def h(t, s, d):
        return t**n * cpow(s, p + 1 + al + be, zero_ok=True) * _rp_array(psi * s, g, p)

    integral = _integrate_with_break(h, rule, _break_point(z))
    return safe_exp(_ln_inv_beta(n, al + be + 1)) * psi ** (p + 1) * integral


def _on_ray(which: int, z: complex) -> bool:
    if z.imag != 0:
        return False
    return z.real > 1 if which == 1 else 0 < z.real < 1


def xi_exact(which: int, n: int, p: int, z, params: Params, rule: QuadratureRule | None = None) -> complex:
    """The remainder xi_which evaluated from its defining integral.

    When the integration path runs along the branch ray of the binomial
    remainder (xi1 for real z > 1, xi2 for real 0 < z < 1) the value is
    recovered from the exact decomposition of P_n instead, with the other
    remainder taken from quadrature.
    """
    z = complex(z)
    _check_request(n, z, params)
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    rule = rule or tanh_sinh()
    if not _on_ray(which, z):
        quad = _xi1_quad if which == 1 else _xi2_quad
        return quad(n, p, z, params, rule)
    pre1, _ = _prefactor1(n, z, params)
    pre2, _ = _prefactor2(n, z, params)
    s1 = _csum(_terms(term1, p + 1, n, z, params))
    s2 = _csum(_terms(term2, p + 1, n, z, params))
    target = eval_P(n, z, params)
    if which == 1:
        other = _xi2_quad(n, p, z, params, rule)
        return (target - pre2 * (s2 + other)) / pre1 - s1
    other = _xi1_quad(n, p, z, params, rule)
    return (target - pre1 * (s1 + other)) / pre2 - s2


# ---------------------------------------------------------------------------
# assembled expansion


@dataclass(frozen=True)
class ExpansionRequest:
    n: int
    z: complex
    params: Params
    p1: int
    p2: int

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if self.p1 < 0 or self.p2 < 0:
            raise ValueError("truncation orders must be nonnegative")
        _check_request(self.n, self.z, self.params)


@dataclass(frozen=True)
class ExpansionResult:
    value: complex
    terms1: list[complex] = field(repr=False)
    terms2: list[complex] = field(repr=False)
    prefactor1: complex
    prefactor2: complex
    bound_xi1: float
    bound_xi2: float
    total_error_bound: float


def _csum(values) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def expand_P(req: ExpansionRequest) -> ExpansionResult:
    """Truncated expansion of P_n with a certified bound on the truncation error."""
    n, z, params = req.n, req.z, req.params
    pre1, lnmod1 = _prefactor1(n, z, params)
    pre2, lnmod2 = _prefactor2(n, z, params)
    terms1 = _terms(term1, req.p1 + 1, n, z, params)
    terms2 = _terms(term2, req.p2 + 1, n, z, params)
    lb1 = _ln_bound(1, n, req.p1, z, params)
    lb2 = _ln_bound(2, n, req.p2, z, params)
    total_ln = np.logaddexp(lnmod1 + lb1, lnmod2 + lb2)
    if total_ln > 709.0:
        raise NumericOverflow("error bound exceeds double range")
    return ExpansionResult(
        value=pre1 * _csum(terms1) + pre2 * _csum(terms2),
        terms1=terms1,
        terms2=terms2,
        prefactor1=pre1,
        prefactor2=pre2,
        bound_xi1=math.exp(lb1),
        bound_xi2=math.exp(lb2),
        total_error_bound=math.exp(total_ln) * (1 + BOUND_SLACK),
    )


def expand_Q(req: ExpansionRequest) -> ExpansionResult:
    """Same expansion for Q_n, i.e. for P_n with beta negated."""
    return expand_P(
        ExpansionRequest(req.n, req.z, req.params.reflected(), req.p1, req.p2)
    )


def converge_P(n: int, z, params: Params, tol: float = 1e-10) -> complex:
    """Sum both series until the certified error is below ``tol``.

    Valid where the series converge for fixed n; raises RegionError elsewhere.
    """
    z = complex(z)
    _check_request(n, z, params)
    if not region_omega1(z):
        raise RegionError(f"z = {z} is outside the convergence region |z| < |z-1|, |z-1| > 1")
    result = converge_P_result(n, z, params, tol)
    return result.value


def converge_P_result(n: int, z, params: Params, tol: float = 1e-10) -> ExpansionResult:
    """As :func:`converge_P` but returns the full :class:`ExpansionResult`."""
    z = complex(z)
    _check_request(n, z, params)
    if not region_omega1(z):
        raise RegionError(f"z = {z} is outside the convergence region |z| < |z-1|, |z-1| > 1")
    _, lnmod1 = _prefactor1(n, z, params)
    _, lnmod2 = _prefactor2(n, z, params)
    half = math.log(tol / 2)
    orders = []
    for which, lnmod in ((1, lnmod1), (2, lnmod2)):
        p = 0
        while lnmod + _ln_bound(which, n, p, z, params) >= half:
            p += 1
            if p >= MAX_CONVERGE_TERMS:
                raise NonConvergence(f"series {which} needs more than {MAX_CONVERGE_TERMS} terms")
        orders.append(p)
    return expand_P(ExpansionRequest(n, z, params, orders[0], orders[1]))


__all__ = [
    "POINT_AT_INFINITY",
    "ExpansionRequest",
    "ExpansionResult",
    "region_omega1",
    "rp_direct",
    "m1",
    "m2",
    "m3",
    "binom_const",
    "term1",
    "term2",
    "xi_exact",
    "bound_xi",
    "expand_P",
    "expand_Q",
    "converge_P",
    "converge_P_result",
    "ln_prefactor1",
    "ln_prefactor2",
]
