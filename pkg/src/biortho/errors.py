"""Exception hierarchy shared by every module."""


class BiorthoError(Exception):
    """Base class for all library errors."""


class PoleError(BiorthoError, ValueError):
    """Argument sits on a pole of the Gamma function."""


class ParameterPole(BiorthoError, ValueError):
    """A hypergeometric denominator parameter hits a forbidden nonpositive integer."""


class DomainError(BiorthoError, ValueError):
    """Argument outside the domain of a function (e.g. 0**a with Re(a) <= 0, z = 1)."""


class RegionError(BiorthoError, ValueError):
    """Parameters or evaluation point outside the region a representation needs."""


class RayError(DomainError):
    """Argument lies on the branch ray where the binomial remainder is undefined."""


class IntegrandError(BiorthoError, ArithmeticError):
    """Quadrature met a non-finite integrand value."""


class NonConvergence(BiorthoError, ArithmeticError):
    """An iterative procedure exhausted its iteration budget."""


class NumericOverflow(BiorthoError, OverflowError):
    """Result exceeds double-precision range."""


class OffCircleError(BiorthoError, ArithmeticError):
    """A polynomial root expected on the unit circle was found off it."""


class BoundaryError(BiorthoError, ValueError):
    """Charge configuration touches the boundary where the energy is infinite."""


class DegenerateError(BiorthoError, ArithmeticError):
    """Division by a vanishing derivative."""
