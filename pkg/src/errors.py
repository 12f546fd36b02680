"""Exception hierarchy shared by the omegabar modules."""


class OmegaBarError(Exception):
    """Base class for all errors raised by omegabar."""


class FieldMismatchError(OmegaBarError, ValueError):
    """Operands live in different fields."""


class FieldSpecError(OmegaBarError, ValueError):
    """A field or embedding was requested with impossible parameters."""


class InfeasibleError(OmegaBarError):
    """An enumeration would exceed one of the caps in config.py."""


class NonHomogeneousError(OmegaBarError, ValueError):
    """A homogeneous fraction was required."""


class NotInChartError(OmegaBarError):
    """A point of B_V does not lie in the requested chart U_F."""


class NotUnipotentError(OmegaBarError, ValueError):
    """A subgroup contains an element whose order is not a power of p."""


class NotClosedError(OmegaBarError, ValueError):
    """An element list is not closed under multiplication."""


class NotReciprocalError(OmegaBarError, ValueError):
    """A value table violates the reciprocal-map identity."""


class InvalidPointError(OmegaBarError, ValueError):
    """A family of hyperplanes fails the corank or nesting conditions."""


class ConsistencyError(OmegaBarError):
    """A structural fact that must always hold was violated."""
