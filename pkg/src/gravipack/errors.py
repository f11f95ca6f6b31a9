"""Exception hierarchy.

Every error is also a ``ValueError`` so callers that only care about bad
input can catch that.
"""


class GravipackError(ValueError):
    pass


class DegenerateIntervalError(GravipackError):
    """Time interval of zero or negative length."""


class CausticError(GravipackError):
    """The van Vleck factor vanishes on the requested interval."""


class DivergentIntegralError(GravipackError):
    """Gaussian integral with growing (or vanishing) quadratic coefficient."""


class DegenerateComparisonError(GravipackError):
    """Two densities of identical width (equal masses) have no crossover."""


class InvalidComparisonError(GravipackError):
    """Densities compared with different centers."""


class BoundaryLeakError(GravipackError):
    """Grid amplitude reached the periodic boundary."""
