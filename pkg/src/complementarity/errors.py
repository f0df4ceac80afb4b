"""Exception hierarchy shared by the library and the command line."""


class ComplementarityError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ComplementarityError, ValueError):
    """An input object violates one of its defining invariants."""


class DimensionError(ValidationError):
    """Shapes or subsystem dimensions are inconsistent."""


class PreconditionError(ComplementarityError, ValueError):
    """Inputs are well formed but an operation's precondition fails
    (for example an informationally incomplete ensemble handed to tomography)."""


class AuditFailure(ComplementarityError):
    """A proven inequality came out violated beyond tolerance.

    This can only mean a bug in the numerics, never a physical result.
    """
