"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from biortho.hyp import Params


def finite(lo, hi):
    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


def complexes(lo=-2.0, hi=2.0):
    return st.builds(complex, finite(lo, hi), finite(lo, hi))


@st.composite
def omega0_params(draw, margin=0.2):
    """Parameters with Re(a+b) > -1 + margin and Re(a-b) > margin."""
    a = draw(finite(0.2, 2.0))
    bi = draw(finite(-0.8, 0.8))
    lo = max(-1 + margin - a, -2.0)
    hi = min(a - margin, 2.0)
    br = draw(finite(lo, hi))
    return Params(complex(a, 0.0), complex(br, bi))


def representation_sample(rng):
    """One (n, z, params) tuple inside the region where all integral forms are
    well resolved by the default rules: alpha in [0.2, 2], Re(a-b) >= 0.2,
    Re(a+b) >= -0.8, |Im b| <= 0.8, |z| in [0.5, 2], |arg z| <= 3 pi/4 and
    |z - 1| >= 0.25."""
    import cmath
    import math

    while True:
        a = rng.uniform(0.2, 2.0)
        br = rng.uniform(max(-0.8 - a, -2.0), a - 0.2)
        bi = rng.uniform(-0.8, 0.8)
        z = cmath.rect(rng.uniform(0.5, 2.0), rng.uniform(-0.75 * math.pi, 0.75 * math.pi))
        if abs(z - 1) >= 0.25:
            return int(rng.integers(0, 13)), z, Params(a, complex(br, bi))
