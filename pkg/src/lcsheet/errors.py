"""Exception hierarchy shared by every module."""


class LightconeError(Exception):
    """Base class for all package errors."""


class InputError(LightconeError, ValueError):
    """Malformed arguments: wrong dimensions, counts or shapes."""


class DomainError(LightconeError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class DegeneracyError(LightconeError, ArithmeticError):
    """Geometric degeneracy: singular metric, wrong signature, rank loss."""


class PreconditionError(LightconeError, ValueError):
    """A documented precondition of an operation does not hold."""


class ParseError(LightconeError, ValueError):
    """Syntax error or unknown identifier in an expression."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EvaluationError(LightconeError, ArithmeticError):
    """Expression evaluation left the domain of a function."""

    def __init__(self, message, subexpr=None):
        if subexpr is not None:
            message = f"{message} in '{subexpr}'"
        super().__init__(message)
        self.subexpr = subexpr


class ConfigError(LightconeError, ValueError):
    """Invalid run configuration."""
