"""Exception types shared across the package."""


class FFError(Exception):
    """Base class for all ffenergy errors."""


class NonPrime(FFError):
    """The requested field characteristic is not prime."""


class FieldTooLarge(FFError):
    """q = p^n exceeds the table-size cap (2**20)."""


class DivisionByZero(FFError, ZeroDivisionError):
    """Inverse or discrete log of the zero element."""


class ZeroDenominator(FFError):
    """Rational function with an identically zero denominator."""


class DegenerateFunction(FFError):
    """Rational function with no non-pole points in the field."""


class BadLambda(FFError):
    """Interval parameter outside [1, p) in the Garaev construction."""


class BadArgument(FFError, ValueError):
    """Argument outside an operation's stated domain."""


class ExceptionalFunction(FFError):
    """Function is of the excluded Artin-Schreier-plus-linear shape."""


class SetTooSmall(FFError):
    """Subset extraction needs at least two elements."""


class EmptyC(FFError):
    """Kloosterman bilinear form over an empty inner set."""


class ConfigError(FFError):
    """Malformed experiment configuration; message names the offending key."""
