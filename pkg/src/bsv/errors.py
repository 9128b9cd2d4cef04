"""Exception types shared across the toolkit."""


class BsvError(Exception):
    """Base class for all toolkit errors."""


class ModeMismatch(BsvError):
    """Operands live in different coefficient fields."""


class DivisionByZero(BsvError, ZeroDivisionError):
    pass


class WrongMode(BsvError):
    """Operation requires a coefficient field feature that is absent."""


class ZeroInput(BsvError):
    pass


class ContextMismatch(BsvError):
    """Polynomials from different variable contexts were combined."""


class NotHomogeneous(BsvError):
    pass


class UncertifiedPrime(BsvError):
    """Eisenstein check received a prime without an irreducibility certificate."""


class EmptyScheme(BsvError):
    pass


class PoleAlongS(BsvError):
    """Restriction of a function with a pole along the target hypersurface."""


class DenominatorVanishes(BsvError):
    pass


class WitnessRejected(BsvError):
    """A curve-valuation witness failed its membership verification."""


class NotAUnit(BsvError):
    """Claimed unit lies in the radical of the curve ideal."""


class NotOnSurface(BsvError):
    pass


class UnboundedOrder(BsvError):
    """m-adic order exceeded the configured cap."""


class FactorizationIncomplete(BsvError):
    """Stated factor list does not reproduce the numerator/denominator."""


class UnresolvedRestriction(BsvError):
    """A (0,0)-curve has an Unknown restriction status; refusing to compute H'."""


class AllOnesMissing(BsvError):
    pass


class BothZero(BsvError):
    pass


class UnknownLemma(BsvError):
    pass


class ScenarioSyntaxError(BsvError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = f" (line {line}" + (f", col {col})" if col is not None else ")") if line else ""
        super().__init__(message + loc)


class UnresolvedName(BsvError):
    pass


class DuplicateName(BsvError):
    pass
