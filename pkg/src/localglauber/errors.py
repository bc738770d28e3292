"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter is outside its documented domain."""


class ValidationError(ValueError):
    """Structured input violates an invariant (bad graph, bad coloring, ...)."""


class ParseError(ValueError):
    """Malformed edge-list text; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(RuntimeError):
    """An exact computation would exceed its configured size budget."""


class InfeasibleError(RuntimeError):
    """No parameter choice satisfies the requested contraction condition."""
