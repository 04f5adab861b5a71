"""Acceptance criteria 1-9, one test each.

Every test records a single PASS/FAIL line, printed at the end of the run in
the "acceptance criteria" section and echoed to stdout.
"""

import cmath
import math

import mpmath
import numpy as np
import pytest

import conftest
from biortho.askey import AskeyRequest, askey_expand
from biortho.cli import run
from biortho.cnum import cpow, gen_binom
from biortho.electro import (
    EnergyConfig,
    energy,
    energy_grad,
    minimize_energy,
    ode_residual,
    para_poly,
    roots_on_circle,
    stationarity_residual,
)
from biortho.errors import IntegrandError, RayError
from biortho.expansion import (
    ExpansionRequest,
    binom_const,
    converge_P_result,
    expand_P,
    rp_direct,
    xi_exact,
)
from biortho.hyp import Params, eval_P, eval_P_unit
from biortho.quad import (
    biorthogonality_constant,
    contour_integral_P,
    euler_integral_P,
    inner_product,
    rp_integral,
    split_integrals,
    split_norm,
)

from strategies import representation_sample

PAIRS = (Params(1, 0.25), Params(0.75, 0.6j))


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    conftest.ACCEPTANCE_LINES[number] = line
    print(line)


def test_criterion_1_biorthogonality():
    worst = 0.0
    for params in PAIRS:
        for n in range(9):
            expected = biorthogonality_constant(n, params)
            for m in range(9):
                target = expected if n == m else 0.0
                worst = max(worst, abs(inner_product(n, m, params) - target))
    ok = worst < 1e-8
    record(1, ok, f"max |<P_n, Q_m> - c_n delta| = {worst:.2e} (tol 1e-8), n, m <= 8, both pairs")
    assert ok


def test_criterion_2_representations():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        n, z, params = representation_sample(rng)
        i1, i2 = split_integrals(n, z, params)
        vals = [
            eval_P(n, z, params),
            euler_integral_P(n, z, params),
            split_norm(params) * (i1 + i2),
            contour_integral_P(n, z, params),
        ]
        worst = max(worst, max(abs(a - b) for a in vals for b in vals))
    ok = worst < 1e-8
    record(2, ok, f"max pairwise gap over 4 representations, 20 tuples = {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_3_expansion_certificate():
    zs = (-2, -0.5 + 0.5j, 3, 0.2 + 1.5j, -1.5 + 2j)
    failures = 0
    worst_total = worst_xi = 0.0
    checked = skipped = 0
    for params in PAIRS:
        for n in (5, 10, 20, 40):
            for p in (0, 1, 3, 6):
                for z in zs:
                    res = expand_P(ExpansionRequest(n, z, params, p, p))
                    err = abs(eval_P(n, z, params) - res.value)
                    worst_total = max(worst_total, err / res.total_error_bound)
                    failures += err > res.total_error_bound
                    for which, bound in ((1, res.bound_xi1), (2, res.bound_xi2)):
                        try:
                            xi = xi_exact(which, n, p, z, params)
                        except (IntegrandError, RayError):
                            skipped += 1
                            continue
                        checked += 1
                        worst_xi = max(worst_xi, abs(xi) / bound)
                        failures += abs(xi) > bound
    ok = failures == 0
    record(
        3,
        ok,
        f"160 grid points, worst error/bound = {worst_total:.3f}; "
        f"{checked} remainders checked ({skipped} not computable), worst |xi|/bound = {worst_xi:.3f}",
    )
    assert ok


def test_criterion_4_asymptotic_order():
    worst = 0.0
    ok = True
    for params in PAIRS:
        for which in (1, 2):
            for p in (0, 1, 3):
                lhs = abs(xi_exact(which, 80, p, -2, params)) * 80 ** (p + 1)
                rhs = abs(xi_exact(which, 40, p, -2, params)) * 40 ** (p + 1)
                ok &= lhs <= 2 * rhs + 1e-12
                worst = max(worst, lhs / rhs if rhs else 0.0)
    record(4, ok, f"worst |xi(80)| 80^(p+1) / (|xi(40)| 40^(p+1)) = {worst:.3f} (limit 2)")
    assert ok


def test_criterion_5_convergent_series():
    worst_err = 0.0
    most_terms = 0
    ok = True
    for params in PAIRS:
        for n in range(11):
            for z in (-2, -1.5 + 2j):
                res = converge_P_result(n, z, params, tol=1e-10)
                err = abs(res.value - eval_P(n, z, params))
                terms = max(len(res.terms1), len(res.terms2))
                ok &= err <= 1e-10 and terms <= 200
                worst_err = max(worst_err, err)
                most_terms = max(most_terms, terms)
    record(5, ok, f"max error {worst_err:.2e} (tol 1e-10), at most {most_terms} terms per series (limit 200)")
    assert ok


def _bernoulli_mp(m, sigma, x):
    # (z/(e^z - 1))^sigma e^{xz}, with (e^z - 1)/z written as 1F1(1; 2; z)
    return mpmath.taylor(lambda z: mpmath.hyp1f1(1, 2, z) ** (-sigma) * mpmath.exp(x * z), 0, m)


def _askey_pair_mp(n, theta, k, params):
    """P_n(e^{i theta/n}) and its order-k truncated expansion, both at 50 digits."""
    with mpmath.workdps(50):
        al, be = mpmath.mpc(params.alpha), mpmath.mpc(params.beta)
        th = mpmath.mpf(theta)
        b1 = _bernoulli_mp(k, -al - be, al - be)
        b2 = _bernoulli_mp(k, -al + be + 1, 0)
        b3 = _bernoulli_mp(k, 2 * al, 0)
        x = mpmath.mpc(0, th)
        series = mpmath.mpc(0)
        for j in range(k + 1):
            c = mpmath.mpc(0)
            for i1 in range(j + 1):
                for i2 in range(j - i1 + 1):
                    c += (
                        b1[i1] * b2[i2] * b3[j - i1 - i2]
                        * mpmath.rf(al + be + 1, i1) * mpmath.rf(al - be, i2) / mpmath.rf(2 * al + 1, i1 + i2)
                        * mpmath.hyp1f1(1 + al + be + i1, 1 + 2 * al + i1 + i2, x)
                    )
            series += c * (x / n) ** j
        poly = mpmath.hyp2f1(-n, al + be + 1, 2 * al + 1, 1 - mpmath.expj(th / n))
        return poly, series


def test_criterion_6_askey_expansion():
    thetas = (math.pi / 4, -math.pi / 4, math.pi / 2, -math.pi / 2, 3.0, -3.0)
    total = in_double = in_extended = 0
    failures = []
    for params in PAIRS:
        for n in (5, 20, 100, 1000):
            for th in thetas:
                for k in range(5):
                    res = askey_expand(AskeyRequest(n, th, k, params))
                    err = abs(eval_P_unit(n, th / n, params) - res.value)
                    total += 1
                    if err <= res.remainder_bound:
                        in_double += 1
                        continue
                    # double rounding of the two values exceeds the bound itself;
                    # settle the inequality at 50 digits
                    poly, series = _askey_pair_mp(n, th, k, params)
                    if abs(poly - series) <= res.remainder_bound:
                        in_extended += 1
                    else:
                        failures.append((n, th, k, err, res.remainder_bound))
    errs = [
        abs(eval_P_unit(n, math.pi / 2 / n, PAIRS[0]) - askey_expand(AskeyRequest(n, math.pi / 2, 0, PAIRS[0])).value)
        for n in (10, 100, 1000)
    ]
    monotone = errs[0] > errs[1] > errs[2]
    ok = not failures and monotone
    detail = f"{in_double + in_extended}/{total} points within remainder_bound"
    if in_extended:
        detail += f" ({in_extended} with the bound below double resolution, verified at 50 digits)"
    detail += f"; k=0 errors at pi/2: {errs[0]:.2e} > {errs[1]:.2e} > {errs[2]:.2e}"
    record(6, ok, detail)
    assert ok


def test_criterion_7_electrostatics():
    worst_res = worst_dev = worst_circle = worst_fd = 0.0
    for n in range(1, 7):
        for p in (0.5, 1, 2):
            for q in (0, 0.3):
                cfg = EnergyConfig(n, p, q)
                poly = para_poly(n, cfg.params)
                desc = np.array(poly.coefficients[::-1])
                worst_circle = max(worst_circle, float(np.max(np.abs(np.abs(np.roots(desc)) - 1))))
                roots = roots_on_circle(poly)
                ref = roots.as_array()
                worst_res = max(worst_res, stationarity_residual(roots, cfg))
                for seed in range(5):
                    found = minimize_energy(cfg, seed=seed).as_array()
                    worst_dev = max(worst_dev, float(np.max(np.abs(found - ref))))
                rng = np.random.default_rng(100 * n + int(10 * p) + int(10 * q))
                th = np.sort(rng.uniform(0.3, 2 * math.pi - 0.3, n))
                h = 1e-6
                fd = np.array([(energy(cfg, th + h * e) - energy(cfg, th - h * e)) / (2 * h) for e in np.eye(n)])
                worst_fd = max(worst_fd, float(np.max(np.abs(energy_grad(cfg, th) - fd))))
    ok = worst_res < 1e-8 and worst_dev < 1e-6 and worst_circle < 1e-10 and worst_fd < 1e-5
    record(
        7,
        ok,
        f"stationarity {worst_res:.1e} (<1e-8), minimizer deviation {worst_dev:.1e} (<1e-6), "
        f"off-circle {worst_circle:.1e} (<1e-10), gradient vs differences {worst_fd:.1e} (<1e-5)",
    )
    assert ok


def _criterion_8_parts():
    rng = np.random.default_rng(8)
    literal_bad = []
    corrected_ok = True
    count = 0
    while count < 500:
        g = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if g == 0:
            continue
        k = int(rng.integers(1, 51))
        size = abs(gen_binom(g, k))
        if not size < math.exp(abs(g) ** 2 + g.real) / k ** (1 + g.real):
            literal_bad.append((g, k))
        corrected_ok &= size < binom_const(g) / k ** (1 + g.real)
        count += 1

    ray_ok = True
    for i in range(100):
        g = complex(rng.uniform(-0.99, -0.01), rng.uniform(-2, 2))
        k = int(rng.integers(0, 6))
        # on the ray psi*u = x is real and below -1 whatever psi is
        x = (-1.1, -2.0, -5.0, -20.0)[i % 4] + 0j
        lhs = abs(cmath.exp(-1j * math.pi * (k - g)) * cpow((1 + x) / x, g) + cpow(1 + x, g) / cpow(x, k + 1))
        ray_ok &= lhs < math.exp(-math.pi * g.imag) * abs(k + 1 - g)

    rp_worst = 0.0
    count = 0
    while count < 30:
        u = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        psi = cmath.rect(rng.uniform(0.3, 1.5), rng.uniform(-math.pi, math.pi))
        g = complex(rng.uniform(-0.9, 2.5), rng.uniform(-1, 1))
        p = int(rng.integers(max(0, math.floor(g.real)), 6))
        w = u * psi
        if abs(w.imag) < 0.05 and w.real < -0.9:
            continue
        d = rp_direct(u, psi, g, p)
        rp_worst = max(rp_worst, abs(d - rp_integral(u, psi, g, p)) / max(1, abs(d)))
        count += 1

    ode_worst = 0.0
    for params in PAIRS:
        for n in range(1, 9):
            for z in (0, 1, 0.5 * cmath.exp(0.7j), -0.3 + 0.2j, cmath.exp(2.1j)):
                ode_worst = max(ode_worst, abs(ode_residual(n, params, z)))
    return literal_bad, corrected_ok, ray_ok, rp_worst, ode_worst


@pytest.mark.xfail(
    strict=True,
    reason="the binomial bound with constant e^{|g|^2+Re g} is false for g near -0.9; "
    "see test_criterion_8_supporting_parts for the corrected constant",
)
def test_criterion_8_inequalities():
    literal_bad, corrected_ok, ray_ok, rp_worst, ode_worst = _criterion_8_parts()
    ok = not literal_bad and ray_ok and rp_worst < 1e-9 and ode_worst < 1e-9
    if literal_bad:
        g, k = literal_bad[0]
        binom = (
            f"binomial bound FAILS on {len(literal_bad)}/500 draws (e.g. g={g.real:.3f}{g.imag:+.3f}i, k={k}; "
            f"corrected constant {'holds' if corrected_ok else 'FAILS'} on all 500)"
        )
    else:
        binom = "binomial bound holds (500 draws)"
    record(
        8,
        ok,
        f"{binom}; ray bound {'holds' if ray_ok else 'FAILS'} (100 samples); "
        f"r_p direct vs integral {rp_worst:.1e} (<1e-9); ODE residual {ode_worst:.1e} (<1e-9)",
    )
    assert ok


def test_criterion_8_supporting_parts():
    _, corrected_ok, ray_ok, rp_worst, ode_worst = _criterion_8_parts()
    assert corrected_ok and ray_ok
    assert rp_worst < 1e-9
    assert ode_worst < 1e-9


def test_criterion_9_determinism():
    first = run(["certify-expansion"])
    second = run(["certify-expansion"])
    ok = first == second and first[0] == 0
    record(9, ok, f"certify-expansion twice: byte-identical JSON ({len(first[1])} bytes), exit {first[0]}")
    assert ok
