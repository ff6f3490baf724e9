"""Exception hierarchy shared by the parsers, the matrix builders and the CLI."""


class DesignError(ValueError):
    """Base class for every error raised on a malformed or unusable design."""


class ParseError(DesignError):
    """Syntax or reference error in a design or circuit text.

    Parameters
    ----------
    message : str
        Human readable description.
    line, column : int, optional
        1-based location of the offending token.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is None:
            text = message
        elif column is None:
            text = f"line {line}: {message}"
        else:
            text = f"line {line}, column {column}: {message}"
        super().__init__(text)


class DegenerateDesignError(DesignError):
    """The design has no edges, so the degree-sum is zero."""


class DisconnectedModuleError(DesignError):
    """An operation that needs a connected vertex set received a disconnected one."""


class NumericalError(ArithmeticError):
    """A spectral computation produced a result that contradicts exact graph facts."""
