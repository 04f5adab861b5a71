"""Hypergeometric evaluators, generalized Bernoulli polynomials, and P_n / Q_n."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath

from .errors import NonConvergence, ParameterPole

# Extra bits beyond the estimated error growth when the double-precision sum
# of a terminating series is not trustworthy.
_GUARD_BITS = 40
# Accept the double-precision sum when its estimated error is within this
# many bits of a correctly rounded result.
_MAX_LOSS_BITS = 1.0
# 1F1 is summed with fsum, which tolerates a little more growth
_F11_LOSS_BITS = 4.0


@dataclass(frozen=True)
class Params:
    """The parameter pair (alpha, beta) of the bi-orthogonal system."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    @property
    def in_omega0(self) -> bool:
        """Re(alpha+beta) > -1 and Re(alpha-beta) > 0."""
        return (self.alpha + self.beta).real > -1 and (self.alpha - self.beta).real > 0

    @property
    def weight_positive(self) -> bool:
        """alpha real and > -1/2, beta purely imaginary: the circle weight is positive."""
        return self.alpha.imag == 0 and self.alpha.real > -0.5 and self.beta.real == 0

    def reflected(self) -> "Params":
        """Parameters with beta negated (Q_n(alpha, beta) = P_n(alpha, -beta))."""
        return Params(self.alpha, -self.beta)

    @classmethod
    def from_charges(cls, p: float, q: float) -> "Params":
        """(alpha, beta) = (p, 2iq), the pair whose para-orthogonal zeros are the equilibrium."""
        return cls(complex(p), 2j * q)


def _check_lower(c: complex, n: int) -> None:
    # (c)_k for k <= n only involves c, c+1, ..., c+n-1
    if c.imag == 0 and c.real <= 0 and c.real == math.floor(c.real) and -c.real <= n - 1:
        raise ParameterPole(f"lower parameter {c.real:g} is a nonpositive integer > -{n}")


def _f21_mp(n: int, a: complex, c: complex, x: complex, prec: int) -> complex:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    a, c, x = ctx.mpc(a), ctx.mpc(c), ctx.mpc(x)
    term = ctx.mpc(1)
    total = ctx.mpc(1)
    for k in range(n):
        term = term * (k - n) * (a + k) / ((c + k) * (k + 1)) * x
        total += term
    return complex(total)


def f21_terminating(n: int, a, c, x) -> complex:
    """2F1(-n, a; c; x) as a finite sum of n+1 terms.

    Terms come from a forward recurrence, so term k carries a relative error
    of order k ulps, and the sum may cancel. Both effects are tracked through
    sum_k (k+1)|t_k| / |sum|; when that exceeds a couple of ulps the sum is
    redone in extended precision with enough bits to cover the loss.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, c, x = complex(a), complex(c), complex(x)
    _check_lower(c, n)
    if n == 0 or x == 0:
        return 1.0 + 0.0j
    term = 1.0 + 0.0j
    re, im = [1.0], [0.0]
    growth = 1.0
    for k in range(n):
        term *= (k - n) * (a + k) / ((c + k) * (k + 1)) * x
        re.append(term.real)
        im.append(term.imag)
        growth += (k + 2) * abs(term)
    if not math.isfinite(growth):
        # terms overflow in double precision; go straight to extended precision
        return _f21_mp(n, a, c, x, 64 + 4 * n)
    total = complex(math.fsum(re), math.fsum(im))
    loss = math.log2(growth / abs(total)) if total != 0 else math.inf
    if loss <= _MAX_LOSS_BITS:
        return total
    prec = 53 + _GUARD_BITS + int(min(loss, 64 + 4 * n))
    while True:
        value = _f21_mp(n, a, c, x, prec)
        loss = math.log2(growth / abs(value)) if value != 0 else math.inf
        if loss + 53 + 8 <= prec or prec > 64 + 8 * n:
            return value
        prec *= 2


def eval_P(n: int, z, params: Params) -> complex:
    """P_n(z; alpha, beta) = 2F1(-n, alpha+beta+1; 2alpha+1; 1-z)."""
    al, be = params.alpha, params.beta
    return f21_terminating(n, al + be + 1, 2 * al + 1, 1 - complex(z))


def eval_P_unit(n: int, phi: float, params: Params) -> complex:
    """P_n(e^{i phi}) with 1 - e^{i phi} formed without cancellation.

    Near phi = 0 a rounded e^{i phi} loses most of the digits of 1 - z, which
    P_n amplifies by roughly n; this entry point avoids that.
    """
    al, be = params.alpha, params.beta
    half = 0.5 * float(phi)
    x = -2j * math.sin(half) * cmath.exp(1j * half)
    return f21_terminating(n, al + be + 1, 2 * al + 1, x)


def eval_Q(n: int, z, params: Params) -> complex:
    """Q_n(z; alpha, beta) = P_n(z; alpha, -beta)."""
    return eval_P(n, z, params.reflected())


def f11(a, c, x, tol: float = 1e-14, max_terms: int = 10_000) -> complex:
    """Confluent 1F1(a; c; x) by Maclaurin summation.

    Stops once three consecutive terms fall below ``tol * |partial sum|``.
    When the terms are much larger than the sum (large |x| off the positive
    axis) the cancellation is measured and the value is recomputed with
    mpmath at a precision that covers the lost bits.
    """
    a, c, x = complex(a), complex(c), complex(x)
    if c.imag == 0 and c.real <= 0 and c.real == math.floor(c.real):
        raise ParameterPole(f"1F1 lower parameter {c.real:g} is a nonpositive integer")
    term = 1.0 + 0.0j
    running = term
    re, im = [1.0], [0.0]
    growth = 1.0
    small = 0
    for k in range(max_terms):
        term *= (a + k) / ((c + k) * (k + 1)) * x
        running += term
        re.append(term.real)
        im.append(term.imag)
        growth += abs(term)
        if abs(term) <= tol * abs(running):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    else:
        raise NonConvergence(f"1F1 series did not converge in {max_terms} terms")
    total = complex(math.fsum(re), math.fsum(im))
    loss = math.log2(growth / abs(total)) if total != 0 else math.inf
    if loss <= _F11_LOSS_BITS:
        return total
    ctx = mpmath.MPContext()
    ctx.prec = 53 + _GUARD_BITS + int(min(loss, 4096))
    return complex(ctx.hyp1f1(ctx.mpc(a), ctx.mpc(c), ctx.mpc(x)))


def _series_log(a: list[complex]) -> list[complex]:
    """log of a power series with a[0] == 1, truncated to len(a)."""
    m = len(a)
    b = [0j] * m
    for k in range(1, m):
        acc = a[k] * k
        for j in range(1, k):
            acc -= j * b[j] * a[k - j]
        b[k] = acc / k
    return b


def _series_exp(g: list[complex]) -> list[complex]:
    """exp of a power series with g[0] == 0."""
    m = len(g)
    e = [0j] * m
    e[0] = 1 + 0j
    for k in range(1, m):
        acc = 0j
        for j in range(1, k + 1):
            acc += j * g[j] * e[k - j]
        e[k] = acc / k
    return e


def bernoulli_coefficients(m: int, sigma, x) -> list[complex]:
    """Taylor coefficients B_j^{(sigma)}(x) / j! for j = 0..m.

    Built from the generating function (z/(e^z-1))^sigma e^{xz}: the series of
    (e^z-1)/z is logged, scaled by -sigma, shifted by xz and exponentiated.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    sigma, x = complex(sigma), complex(x)
    base = [1.0 / math.factorial(k + 1) + 0j for k in range(m + 1)]
    g = [-sigma * c for c in _series_log(base)]
    if m >= 1:
        g[1] += x
    return _series_exp(g)


def gen_bernoulli(m: int, sigma, x) -> complex:
    """Generalized Bernoulli polynomial B_m^{(sigma)}(x), m <= 64."""
    if m > 64:
        raise ValueError("gen_bernoulli supports m <= 64")
    return bernoulli_coefficients(m, sigma, x)[m] * math.factorial(m)


__all__ = [
    "Params",
    "f21_terminating",
    "eval_P",
    "eval_P_unit",
    "eval_Q",
    "f11",
    "gen_bernoulli",
    "bernoulli_coefficients",
]
