"""Complex special-function kernels: Gamma, Pochhammer, binomials, Beta, powers.

All powers and logarithms use the principal branch, arg z in (-pi, pi].
Scalar functions take and return Python ``complex``; :func:`cpow` and
:func:`clog` also accept numpy arrays so quadrature integrands can be
evaluated in one shot.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError, NumericOverflow, PoleError

# Lanczos approximation, g = 7, nine coefficients (Godfrey). About 15
# significant digits for Re(z) >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)
_LN_PI = math.log(math.pi)
# exp overflows just above this
_LN_MAX = 709.78


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def ln_gamma(z) -> complex:
    """Logarithm of the Gamma function for complex ``z``.

    The branch is the standard log-gamma branch: analytic in the right
    half-plane and real on the positive axis. Arguments with Re(z) < 0.5 go
    through the reflection formula.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise PoleError(f"Gamma has a pole at {z}")
        return _LN_PI - cmath.log(s) - ln_gamma(1.0 - z)
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LN_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def safe_exp(w: complex) -> complex:
    """``exp(w)`` that raises :class:`NumericOverflow` instead of returning inf."""
    w = complex(w)
    if w.real > _LN_MAX:
        raise NumericOverflow(f"exp of {w.real:.6g} exceeds double range")
    return cmath.exp(w)


def gamma(z) -> complex:
    return safe_exp(ln_gamma(z))


def ln_gamma_real(x: float) -> float:
    """log|Gamma(x)| for real x, used by the real-valued bound formulas."""
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x:g}")
    return math.lgamma(x)


def pochhammer(a, k: int) -> complex:
    """Rising factorial (a)_k as a finite product (harmless at Gamma poles)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = complex(a)
    out = 1.0 + 0.0j
    for j in range(k):
        out *= a + j
    return out


def gen_binom(a, k: int) -> complex:
    """Generalized binomial coefficient binom(a, k) = prod_{j=1..k} (a-j+1)/j."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = complex(a)
    out = 1.0 + 0.0j
    for j in range(1, k + 1):
        out *= (a - j + 1) / j
    return out


def ln_beta(a, b) -> complex:
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(complex(a) + complex(b))


def beta_fn(a, b) -> complex:
    return safe_exp(ln_beta(a, b))


def principal_arg(z):
    """arg z in (-pi, pi]; maps the -pi that numpy returns for -x-0j to +pi."""
    if np.ndim(z) == 0:
        z = complex(z)
        ang = math.atan2(z.imag, z.real)
        return math.pi if ang == -math.pi else ang
    ang = np.angle(z)
    return np.where(ang == -np.pi, np.pi, ang)


def clog(z):
    """Principal logarithm ln|z| + i arg z."""
    if np.ndim(z) == 0:
        z = complex(z)
        if z == 0:
            raise DomainError("log(0)")
        return complex(math.log(abs(z)), principal_arg(z))
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(z)) + 1j * principal_arg(z)


def cpow(z, a, *, zero_ok: bool = False):
    """Principal power exp(a * (ln|z| + i arg z)).

    ``z = 0`` raises :class:`DomainError` unless ``zero_ok`` is set and
    Re(a) > 0, in which case the limit 0 is returned. Array input is
    evaluated elementwise; zeros in arrays map to 0 when Re(a) > 0.
    """
    a = complex(a)
    if np.ndim(z) == 0:
        z = complex(z)
        if z == 0:
            if zero_ok and a.real > 0:
                return 0j
            raise DomainError("0 raised to a power with Re(a) <= 0 (or zero not allowed)")
        if a == 0:
            return 1 + 0j
        return cmath.exp(a * clog(z))
    z = np.asarray(z, dtype=complex)
    if a == 0:
        return np.ones_like(z)
    zero = z == 0
    if np.any(zero) and a.real <= 0:
        raise DomainError("0 raised to a power with Re(a) <= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(a * clog(np.where(zero, 1.0, z)))
    return np.where(zero, 0.0, out)


def ln_gamma_ratio(a, b) -> complex:
    """ln(Gamma(a) / Gamma(b))."""
    return ln_gamma(a) - ln_gamma(b)
