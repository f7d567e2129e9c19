"""Exception types shared across the package."""


class RefdenError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(RefdenError, ValueError):
    """Input data is malformed (non-finite entries, unparseable files)."""


class InvalidArgumentError(RefdenError, ValueError):
    """An argument is out of range or inconsistent with the others."""


class NumericalError(RefdenError, ArithmeticError):
    """An iterative numerical routine failed to converge."""


class SeparationError(NumericalError):
    """A logistic fit diverged, indicating (quasi-)complete separation."""


class PreconditionError(InvalidArgumentError):
    """Parameters violate the stated precondition of a verifier."""
