"""Exception hierarchy shared by the library and the command line."""


class InputError(ValueError):
    """Malformed or out-of-range input (CLI exit code 2)."""


class DiagramSyntaxError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DiagramValidationError(InputError):
    """Raised when a parsed diagram violates the unital Bratteli invariants."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid diagram:\n" + "\n".join(f"  {i}" for i in report.issues))


class CharactersUndecidable(InputError):
    pass


class StabilizationError(RuntimeError):
    """A periodic fixed-point computation did not settle within its cap."""


class CrossCheckError(RuntimeError):
    """Two independent routes to the same verdict disagreed (CLI exit code 3)."""


class BranchError(ValueError):
    """Principal logarithm requested for a unitary with spectrum at -1."""


class DomainError(ValueError):
    pass
