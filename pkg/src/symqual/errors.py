"""Exception types raised across the package."""


class SymQualError(Exception):
    """Base class for all errors raised by symqual."""


class ValidationError(SymQualError, ValueError):
    """Input object violates a structural invariant."""


class NotBijective(ValidationError):
    pass


class AdjacencyViolated(ValidationError):
    def __init__(self, u, v, message=None):
        self.u = u
        self.v = v
        super().__init__(message or f"edge {{{u}, {v}}} is not mapped to an edge")


class KindUndetermined(ValidationError):
    pass


class KindMismatch(ValidationError):
    pass


class GroupNotClosed(ValidationError):
    pass


class GraphMismatch(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class NonFinite(ValidationError):
    pass


class DegeneratePointSet(SymQualError, ValueError):
    pass


class OrbitSizeMismatch(SymQualError, ValueError):
    pass


class TooLarge(SymQualError, ValueError):
    pass


class NoRotationalGenerator(SymQualError, ValueError):
    pass


class SingularSystem(SymQualError, ValueError):
    pass


class DisconnectedGraph(SymQualError, ValueError):
    pass


class PlanInvalid(SymQualError, ValueError):
    pass


class ConvergenceFailure(UserWarning):
    """Iterative layout hit its iteration cap above tolerance."""
