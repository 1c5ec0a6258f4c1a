"""Exception taxonomy shared by every module and relayed by the CLI."""


class LWError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(LWError, ValueError):
    pass


class GradeError(LWError, ValueError):
    pass


class ZeroTensorError(LWError, ValueError):
    pass


class CenterPointError(LWError, ValueError):
    """The point lies in the center of a projection, where the map is undefined."""


class SingularMatrixError(LWError, ValueError):
    pass


class NotAdmissibleError(LWError, ValueError):
    """A function basis cannot define an operator with polynomial coefficients."""


class PreconditionError(LWError, ValueError):
    pass


class DomainError(LWError, ValueError):
    """Mixing elements of incompatible quadratic extensions, or similar."""
