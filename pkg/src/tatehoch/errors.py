class TateError(Exception):
    exit_code = 1


class SpecError(TateError):
    """Malformed algebra spec file; carries the offending line when known."""
    exit_code = 2

    def __init__(self, msg, line=None):
        self.line = line
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)


class MathError(TateError):
    """A mathematical precondition failed (non-associative table, degenerate form, ...)."""
    exit_code = 3


class RadicalUnavailable(MathError):
    pass


class WindowError(MathError):
    """The degree window is too small for the requested computation."""


class PropertyFailure(TateError):
    """A verified identity did not hold."""
    exit_code = 4
