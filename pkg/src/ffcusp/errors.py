"""Exception types shared across the package."""


class PrecisionExhausted(ArithmeticError):
    """Raised when a truncated series does not carry enough certified digits.

    ``prefix`` optionally holds whatever was certified before running out
    (for example the partial quotients of a continued fraction).
    """

    def __init__(self, message, prefix=None):
        super().__init__(message)
        self.prefix = prefix


class CharacteristicTwoError(ValueError):
    pass


class NoRootError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured budget."""


class ParseError(ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
