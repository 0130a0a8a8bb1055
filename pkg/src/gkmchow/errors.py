"""Exception hierarchy shared by all gkmchow modules."""


class GkmError(Exception):
    """Base class for every error raised by gkmchow."""


# polyalg

class ZeroCharacter(GkmError, ValueError):
    pass


class NotPrimitive(GkmError, ValueError):
    pass


# gkmgraph

class SchemaError(GkmError, ValueError):
    """Malformed graph document.  ``path`` is a JSON-path-like locator."""

    def __init__(self, message, path="$", line=None):
        self.path = path
        self.line = line
        where = path if line is None else f"{path} (line {line})"
        super().__init__(f"{where}: {message}")


class ValidationError(GkmError, ValueError):
    """Graph failed validation; ``report`` carries every violation."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(str(v) for v in report.violations)
        super().__init__(f"invalid GKM graph: {lines}")


class UnsupportedSurfaceRelations(GkmError, ValueError):
    pass


class WeylClosureExceeded(GkmError, ValueError):
    pass


# ppmodule

class DegreeMismatch(GkmError, ValueError):
    pass


class GraphMismatch(GkmError, ValueError):
    pass


class NotMember(GkmError, ValueError):
    """Candidate family violates a congruence; ``constraint`` names the first one."""

    def __init__(self, message, constraint=None):
        self.constraint = constraint
        super().__init__(message)


class NotInSpan(GkmError, ValueError):
    pass


class NonUniqueSolution(GkmError, ValueError):
    pass


class NoWeylData(GkmError, ValueError):
    pass


# catalog

class FanError(GkmError, ValueError):
    pass


class IncompleteFan(FanError):
    pass


class NonSimplicial(FanError):
    pass
