"""Exception hierarchy shared by every module of the package."""


class BirkhoffError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(BirkhoffError, ValueError):
    """A field or place configuration is invalid or unsupported."""


class FieldMismatch(BirkhoffError, ValueError):
    """Operands live in different finite fields."""


class DivisionByZero(BirkhoffError, ZeroDivisionError):
    pass


class PrecisionExhausted(BirkhoffError, ArithmeticError):
    """A truncated series does not carry enough terms to decide a result."""


class FlavorMismatch(BirkhoffError, TypeError):
    pass


class SizeMismatch(BirkhoffError, ValueError):
    pass


class SingularInput(BirkhoffError, ValueError):
    pass


class NonUnitDeterminant(BirkhoffError, ValueError):
    pass


class PotentialStall(BirkhoffError, RuntimeError):
    """The reduction potential failed to decrease as guaranteed (internal bug)."""


class WitnessCheckFailed(BirkhoffError, RuntimeError):
    pass


class OracleMismatch(BirkhoffError, RuntimeError):
    pass


class ParseError(BirkhoffError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
