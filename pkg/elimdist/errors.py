"""Error types. All of them are ValueErrors, so callers can catch broadly."""


class ElimDistError(ValueError):
    """Base class for every error raised by elimdist."""


class FormulaSyntaxError(ElimDistError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ArityError(ElimDistError):
    """Assignment length does not match the formula's free variables."""


class PreconditionError(ElimDistError):
    """An operation was called outside its documented domain."""


class SizeCapExceeded(ElimDistError):
    """An exponential search was asked to run above its configured cap."""


class GraphFormatError(ElimDistError):
    """A graph or instance file could not be parsed."""
