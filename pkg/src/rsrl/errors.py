"""Exception hierarchy shared by every module of the package."""


class RsrlError(Exception):
    """Base class for all errors raised by this package."""


class RegexSyntaxError(RsrlError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UndeclaredSymbolError(RsrlError):
    def __init__(self, symbol, alphabet=None):
        where = f" in alphabet {{{', '.join(alphabet)}}}" if alphabet is not None else ""
        super().__init__(f"symbol {symbol!r} is not declared{where}")
        self.symbol = symbol


class AlphabetError(RsrlError):
    """Invalid alphabet declaration or mismatched alphabets between operands."""


class BudgetExceeded(RsrlError):
    """A configurable resource guard was hit.

    Raised instead of returning a (possibly wrong) answer, so callers can tell
    "too large to decide here" apart from a negative result.
    """

    def __init__(self, kind, limit):
        super().__init__(f"{kind} budget of {limit} exceeded")
        self.kind = kind
        self.limit = limit


class NotStarFreeError(RsrlError):
    """An operation that requires a finite (Kleene-star-free) generator got a starred one."""

    def __init__(self, operation, reason=None):
        msg = f"{operation} requires a Kleene-star-free generator"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.operation = operation


class EmptyWordError(RsrlError):
    """A substitution was applied to the empty word, which it is not defined on."""


class ValidationError(RsrlError):
    """A structural invariant of an RSRL or spec file is violated."""


class SpecFileError(RsrlError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
