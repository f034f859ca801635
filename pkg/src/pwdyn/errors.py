"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Input outside the map's domain or the parameter square."""


class DegenerateParameterError(ValueError):
    """Operation needs a*b != 0 but got a degenerate parameter pair."""


class PreconditionError(ValueError):
    """The parameter regime an operation requires does not hold."""


class NumericIntegrityError(ArithmeticError):
    """A computed value violated a bound by more than rounding can explain."""


class SimplexViolationError(ValueError):
    """State left the unit simplex beyond tolerance."""


class RuleRangeError(ValueError):
    """A parameter rule b = g(a) left [0,1] somewhere on the requested grid."""


class ResolutionWarning(UserWarning):
    """Two roots fell closer together than the scan grid can separate."""
