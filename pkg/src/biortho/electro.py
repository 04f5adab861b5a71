"""Circle-charge electrostatics and the para-orthogonal polynomial B_n.

n unit charges sit at e^{i theta_j}, theta_j in (0, 2 pi), with a fixed charge
p at z = 1 and a rotational field of strength q. The energy counts each pair of
movable charges once. Its minimiser is the zero set of B_n with alpha = p and
beta = 2iq, which this module lets you check from both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cnum import pochhammer
from .errors import (
    BoundaryError,
    DegenerateError,
    NonConvergence,
    OffCircleError,
    ParameterPole,
)
from .hyp import Params, _check_lower

TWO_PI = 2.0 * math.pi
BOUNDARY_GAP = 1e-12


@dataclass(frozen=True)
class EnergyConfig:
    n: int
    p: float
    q: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.p > 0:
            raise ValueError("p must be positive")

    @property
    def params(self) -> Params:
        """The (alpha, beta) = (p, 2iq) pair whose B_n zeros are the equilibrium."""
        return Params.from_charges(self.p, self.q)


@dataclass(frozen=True)
class ZeroConfiguration:
    thetas: tuple[float, ...]

    def __post_init__(self):
        th = tuple(float(t) for t in self.thetas)
        object.__setattr__(self, "thetas", th)
        if not th:
            raise ValueError("a configuration needs at least one angle")
        if any(not 0 < t < TWO_PI for t in th):
            raise ValueError("angles must lie in (0, 2 pi)")
        if any(b <= a for a, b in zip(th, th[1:])):
            raise ValueError("angles must be strictly increasing")

    def __len__(self) -> int:
        return len(self.thetas)

    def as_array(self) -> np.ndarray:
        return np.array(self.thetas)


@dataclass(frozen=True)
class PolyCoeffs:
    """Monic polynomial, coefficients in ascending powers (last entry is 1)."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        c = tuple(complex(v) for v in self.coefficients)
        object.__setattr__(self, "coefficients", c)
        if len(c) < 2 or c[-1] != 1:
            raise ValueError("expected a monic polynomial of degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        # numpy wants descending order
        return np.polyval(self.coefficients[::-1], z)


def _as_thetas(thetas) -> np.ndarray:
    if isinstance(thetas, ZeroConfiguration):
        return thetas.as_array()
    return ZeroConfiguration(tuple(thetas)).as_array()


def para_poly(n: int, params: Params) -> PolyCoeffs:
    """Monic B_n = (2a)_n/(a+b)_n 2F1(-n, a+b; 2a; 1-z) in the monomial basis."""
    if n < 1:
        raise ValueError("n must be >= 1")
    al, be = params.alpha, params.beta
    if al == 0:
        raise ParameterPole("B_n needs alpha != 0")
    a, c = al + be, 2 * al
    _check_lower(c, n)
    lead = pochhammer(a, n)
    if lead == 0:
        raise ParameterPole("(alpha+beta)_n vanishes")
    scale = pochhammer(c, n) / lead
    # hypergeometric coefficients in w = 1 - z
    hk = [1 + 0j]
    for k in range(n):
        hk.append(hk[-1] * (k - n) * (a + k) / ((c + k) * (k + 1)))
    coef = np.zeros(n + 1, dtype=complex)
    for k, h in enumerate(hk):
        # (1 - z)^k = sum_m binom(k, m) (-z)^m
        for m in range(k + 1):
            coef[m] += h * math.comb(k, m) * (-1) ** m
    coef *= scale
    coef /= coef[-1]
    coef[-1] = 1
    return PolyCoeffs(tuple(coef))


def roots_on_circle(coeffs: PolyCoeffs, tol: float = 1e-10, max_sweeps: int = 500) -> ZeroConfiguration:
    """All zeros by Aberth iteration, returned as sorted arguments in (0, 2 pi)."""
    n = coeffs.degree
    desc = np.array(coeffs.coefficients[::-1])
    ddesc = np.polyder(desc)
    start = 2 * math.pi * (np.arange(n) + 0.5 / n) / n
    z = np.exp(1j * start)
    for _ in range(max_sweeps):
        ratio = np.polyval(desc, z) / np.polyval(ddesc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        step = ratio / (1 - ratio * inv.sum(axis=1))
        z = z - step
        if np.max(np.abs(step)) < 1e-14:
            break
    else:
        raise NonConvergence(f"Aberth iteration did not settle in {max_sweeps} sweeps")
    off = np.max(np.abs(np.abs(z) - 1))
    if off > tol:
        raise OffCircleError(f"a zero lies {off:.3g} away from the unit circle")
    th = np.mod(np.angle(z), TWO_PI)
    return ZeroConfiguration(tuple(np.sort(th)))


def _check_boundary(th: np.ndarray) -> None:
    if th[0] < BOUNDARY_GAP or th[-1] > TWO_PI - BOUNDARY_GAP:
        raise BoundaryError("a charge is within 1e-12 of the fixed charge at z = 1")
    if len(th) > 1 and np.min(np.diff(th)) < BOUNDARY_GAP:
        raise BoundaryError("two charges are within 1e-12 of each other")


def energy(cfg: EnergyConfig, thetas) -> float:
    th = _as_thetas(thetas)
    if len(th) != cfg.n:
        raise ValueError(f"expected {cfg.n} angles, got {len(th)}")
    _check_boundary(th)
    # |e^{ia} - e^{ib}| = 2 |sin((a-b)/2)|
    i, j = np.triu_indices(cfg.n, k=1)
    pair = -np.sum(np.log(2 * np.abs(np.sin((th[i] - th[j]) / 2))))
    fixed = -cfg.p * np.sum(np.log(2 * np.sin(th / 2)))
    return float(pair + fixed + cfg.q * np.sum(th))


def energy_grad(cfg: EnergyConfig, thetas) -> np.ndarray:
    th = _as_thetas(thetas)
    if len(th) != cfg.n:
        raise ValueError(f"expected {cfg.n} angles, got {len(th)}")
    _check_boundary(th)
    z = np.exp(1j * th)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    pair = z[:, None] / diff
    np.fill_diagonal(pair, 0.0)
    aux = (cfg.n + cfg.p - 1) / 2 - 1j * cfg.q
    field = (cfg.p / (1 - z) + aux / z) * z
    return np.imag(pair.sum(axis=1)) - np.imag(field)


def stationarity_residual(thetas, cfg: EnergyConfig) -> float:
    """max_j of |Im(...)| for the equilibrium condition written through f = prod(z - z_j)."""
    th = _as_thetas(thetas)
    z = np.exp(1j * th)
    al, be = complex(cfg.p), 2j * cfg.q
    n = len(z)
    worst = 0.0
    for j in range(n):
        others = np.delete(z, j)
        d = z[j] - others
        fp = np.prod(d)
        if fp == 0:
            raise DegenerateError("f'(z_j) vanishes: repeated zero")
        fpp = 2 * fp * np.sum(1 / d)
        zj = z[j]
        num = zj * (1 - zj) * fpp - (n + al - 1 - be - (n - al - be - 1) * zj) * fp
        worst = max(worst, abs((num / (fp * (1 - zj))).imag))
    return worst


def _random_start(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        th = np.sort(rng.uniform(0, TWO_PI, n))
        gaps = np.diff(np.concatenate(([0.0], th, [TWO_PI])))
        if np.min(gaps) > 1e-3:
            return th


def _feasible(th: np.ndarray) -> bool:
    if th[0] <= BOUNDARY_GAP or th[-1] >= TWO_PI - BOUNDARY_GAP:
        return False
    return len(th) == 1 or bool(np.min(np.diff(th)) > BOUNDARY_GAP)


def minimize_energy(
    cfg: EnergyConfig,
    init: ZeroConfiguration | Sequence[float] | None = None,
    *,
    seed: int | None = None,
    tol: float = 1e-10,
    maxiter: int = 50_000,
) -> ZeroConfiguration:
    """Gradient descent with Armijo backtracking inside the ordered region.

    The trial step is the Barzilai-Borwein length from the previous iterate;
    it is halved first until the new angles stay ordered and inside
    (0, 2 pi), then until the sufficient-decrease test passes.
    """
    if init is None:
        th = _random_start(cfg.n, np.random.default_rng(seed))
    else:
        th = _as_thetas(init)
    e = energy(cfg, th)
    g = energy_grad(cfg, th)
    step = 0.1
    # near the minimum the predicted decrease drops below the rounding in E
    slack = 64 * np.finfo(float).eps
    for _ in range(maxiter):
        if np.max(np.abs(g)) < tol:
            return ZeroConfiguration(tuple(th))
        t = step
        while True:
            cand = th - t * g
            if _feasible(cand):
                e_new = energy(cfg, cand)
                if e_new <= e - 1e-4 * t * float(g @ g) + slack * max(1.0, abs(e)):
                    break
            t *= 0.5
            if t < 1e-300:
                raise NonConvergence("line search failed to find a decrease")
        g_new = energy_grad(cfg, cand)
        s, y = cand - th, g_new - g
        sy = float(s @ y)
        step = float(s @ s) / sy if sy > 0 else 2 * t
        step = min(max(step, 1e-12), 10.0)
        th, e, g = cand, e_new, g_new
    raise NonConvergence(f"gradient norm still {np.max(np.abs(g)):.3g} after {maxiter} iterations")


def ode_residual(n: int, params: Params, z) -> complex:
    """z(1-z)y'' - (a+n-b-1-(n-a-b-1)z)y' + n(a+b)y at z, with y = B_n."""
    al, be = params.alpha, params.beta
    desc = np.array(para_poly(n, params).coefficients[::-1])
    d1 = np.polyder(desc)
    d2 = np.polyder(d1) if n >= 2 else np.array([0j])
    z = complex(z)
    y, yp, ypp = (complex(np.polyval(c, z)) for c in (desc, d1, d2))
    return z * (1 - z) * ypp - (al + n - be - 1 - (n - al - be - 1) * z) * yp + n * (al + be) * y


__all__ = [
    "EnergyConfig",
    "ZeroConfiguration",
    "PolyCoeffs",
    "para_poly",
    "roots_on_circle",
    "energy",
    "energy_grad",
    "stationarity_residual",
    "minimize_energy",
    "ode_residual",
]
